#pragma once

/**
 * @file counting.hpp
 * @brief Counting f-exunit points on X modulo n, by direct enumeration and by
 * the product over the primes dividing n.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exunit/enumerate.hpp"
#include "exunit/error.hpp"
#include "exunit/ideal.hpp"
#include "exunit/poly.hpp"
#include "exunit/residue.hpp"
#include "exunit/variety.hpp"

namespace exunit {

struct LocalData {
  PrimeFactor prime;
  Integer count_X;
  Integer count_N;
  /// (count_X - count_N) / N(P)^(amb - codim)
  Rational factor;
};

enum class CountMethod { Formula, Brute, Both };

inline std::string_view method_name(CountMethod m) {
  switch (m) {
    case CountMethod::Formula: return "formula";
    case CountMethod::Brute: return "brute";
    case CountMethod::Both: return "both";
  }
  return "?";
}

struct CountReport {
  Integer modulus_norm;
  std::size_t exponent = 0;
  std::vector<LocalData> locals;
  Integer total;
  CountMethod method = CountMethod::Formula;
  std::optional<bool> agreement;
};

inline void require_nonconstant(const MultiPoly& f) {
  if (f.amb() != 1) throw Error(Errc::DimensionMismatch, "f must be a polynomial in x1 only");
  if (f.is_constant()) throw Error(Errc::ConstantPolynomial, "f must be non-constant");
}

namespace detail {

/// Per-residue flag "f(r) is a unit" (or "f(r) != 0" over a field), tabled when affordable.
template <ResidueBackend B>
class UnitFlags {
 public:
  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 24;

  UnitFlags(const B& b, const MultiPoly& f, bool field) : b_(b), f_(CompiledPoly<B>::compile(b, f)), field_(field) {
    if (b.size() <= kTableLimit) {
      table_.resize(b.size());
      for (std::uint64_t r = 0; r < b.size(); ++r) table_[r] = compute(b.at(r));
    }
  }

  bool operator()(const TupleWalker<B>& w, std::size_t j) const {
    if (!table_.empty()) return table_[w.index(j)];
    return compute(w.value(j));
  }

 private:
  bool compute(const typename B::elem& x) const {
    auto v = eval_at(b_, f_, {x});
    return field_ ? !b_.is_zero(v) : b_.is_unit(v);
  }

  const B& b_;
  CompiledPoly<B> f_;
  bool field_;
  std::vector<char> table_;
};

inline Integer to_integer(const Rational& q) {
  if (q.get_den() != 1) throw std::logic_error("product formula left a denominator: " + q.get_str());
  return q.get_num();
}

}  // namespace detail

/// Literal definition: tuples on X whose every coordinate has f(x_i) a unit mod n.
inline Integer brute_force_count(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f, const IdealHNF& n,
                                 const EnumOptions& opt = {}) {
  require_nonconstant(f);
  const ResidueCtx ctx(ring, n);
  const std::uint64_t total = tuple_count(ctx.norm(), V.amb, opt.cap, Errc::CapExceeded);
  return with_backend(ctx, opt.backend, [&](const auto& b) {
    using B = std::decay_t<decltype(b)>;
    std::vector<detail::CompiledPoly<B>> eqs;
    for (const auto& e : V.equations) eqs.push_back(detail::CompiledPoly<B>::compile(b, e));
    const auto max_power = detail::merged_max_power(V.amb, eqs);
    const detail::UnitFlags<B> unit(b, f, false);
    auto parts = detail::partitioned(total, opt.workers, [&](std::uint64_t begin, std::uint64_t end) {
      std::uint64_t count = 0;
      detail::TupleWalker<B> w(b, V.amb, max_power, begin);
      for (std::uint64_t i = begin; i < end; ++i, w.next()) {
        bool ok = true;
        for (std::size_t j = 0; j < V.amb && ok; ++j) ok = unit(w, j);
        if (ok && detail::all_vanish(b, eqs, w)) ++count;
      }
      return count;
    });
    Integer sum = 0;
    for (auto c : parts) sum += Integer(static_cast<unsigned long>(c));
    return sum;
  });
}

/// #X(O_K/P) and #N^f(P, X) in a single pass over the fibre.
inline LocalData local_counts(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f, const PrimeFactor& P,
                              const EnumOptions& opt = {}) {
  require_nonconstant(f);
  const ResidueCtx ctx = ResidueCtx::prime(ring, P);
  const std::uint64_t total = tuple_count(ctx.norm(), V.amb, opt.cap, Errc::CapExceeded);
  struct Part {
    std::uint64_t on_x = 0;
    std::uint64_t good = 0;
  };
  auto parts = with_backend(ctx, opt.backend, [&](const auto& b) {
    using B = std::decay_t<decltype(b)>;
    std::vector<detail::CompiledPoly<B>> eqs;
    for (const auto& e : V.equations) eqs.push_back(detail::CompiledPoly<B>::compile(b, e));
    const auto max_power = detail::merged_max_power(V.amb, eqs);
    const detail::UnitFlags<B> nonzero(b, f, true);
    return detail::partitioned(total, opt.workers, [&](std::uint64_t begin, std::uint64_t end) {
      Part part;
      detail::TupleWalker<B> w(b, V.amb, max_power, begin);
      for (std::uint64_t i = begin; i < end; ++i, w.next()) {
        if (!detail::all_vanish(b, eqs, w)) continue;
        ++part.on_x;
        bool ok = true;
        for (std::size_t j = 0; j < V.amb && ok; ++j) ok = nonzero(w, j);
        if (ok) ++part.good;
      }
      return part;
    });
  });
  Integer on_x = 0, good = 0;
  for (const auto& p : parts) {
    on_x += Integer(static_cast<unsigned long>(p.on_x));
    good += Integer(static_cast<unsigned long>(p.good));
  }
  Rational factor(good, ipow(P.norm(), V.amb - V.codim));
  factor.canonicalize();
  return LocalData{P, on_x, Integer(on_x - good), factor};
}

inline Integer prime_power_count(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f, const PrimeFactor& P,
                                 unsigned long e, const EnumOptions& opt = {}) {
  if (e == 0) throw Error(Errc::InvalidConfig, "prime exponent must be positive");
  require_nonconstant(f);
  require_good_reduction(ring, V, P, opt);
  const LocalData ld = local_counts(ring, V, f, P, opt);
  return ipow(P.norm(), (V.amb - V.codim) * (e - 1)) * (ld.count_X - ld.count_N);
}

/// Product formula from an explicit factorization; the modulus itself is never formed.
inline CountReport theorem1_count(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f,
                                  const std::vector<PrimeFactor>& factors, const EnumOptions& opt = {}) {
  require_nonconstant(f);
  if (factors.empty()) throw Error(Errc::UnitIdeal, "modulus is the unit ideal");
  CountReport rep;
  rep.exponent = V.amb - V.codim;
  rep.modulus_norm = 1;
  Rational product = 1;
  for (const auto& P : factors) {
    rep.modulus_norm *= ipow(P.norm(), P.exponent);
    require_good_reduction(ring, V, P, opt);
    rep.locals.push_back(local_counts(ring, V, f, P, opt));
    product *= rep.locals.back().factor;
  }
  rep.total = detail::to_integer(Rational(ipow(rep.modulus_norm, rep.exponent)) * product);
  return rep;
}

inline CountReport theorem1_count(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f, const IdealHNF& n,
                                  const EnumOptions& opt = {}) {
  require_nonconstant(f);
  return theorem1_count(ring, V, f, factor_ideal(ring, n), opt);
}

using Histogram = std::map<std::uint64_t, std::uint64_t>;

/// For each point of X(O_K/P^k), the number of its lifts to X(O_K/P^(k+1)), binned.
inline Histogram lifting_census(const NumberRing& ring, const VarietySpec& V, const PrimeFactor& P, unsigned k,
                                const EnumOptions& opt = {}) {
  if (k == 0) throw Error(Errc::InvalidConfig, "census level k must be positive");
  require_good_reduction(ring, V, P, opt);
  const IdealHNF p_ideal = P.hnf;
  const ResidueCtx lo(ring, ideal_pow(ring, p_ideal, k));
  const ResidueCtx hi(ring, ideal_pow(ring, p_ideal, k + 1));
  const std::uint64_t hi_total = tuple_count(hi.norm(), V.amb, opt.cap, Errc::CapExceeded);
  const std::uint64_t lo_total = tuple_count(lo.norm(), V.amb, opt.cap, Errc::CapExceeded);

  // residue index mod P^(k+1) -> residue index mod P^k
  std::vector<std::uint64_t> down(hi.size());
  for (std::uint64_t r = 0; r < hi.size(); ++r) down[r] = lo.index_of(lo.reduce(hi.at(r)));

  auto lift_parts = with_backend(hi, opt.backend, [&](const auto& b) {
    using B = std::decay_t<decltype(b)>;
    std::vector<detail::CompiledPoly<B>> eqs;
    for (const auto& e : V.equations) eqs.push_back(detail::CompiledPoly<B>::compile(b, e));
    const auto max_power = detail::merged_max_power(V.amb, eqs);
    return detail::partitioned(hi_total, opt.workers, [&](std::uint64_t begin, std::uint64_t end) {
      std::vector<std::uint32_t> lifts(lo_total, 0);
      detail::TupleWalker<B> w(b, V.amb, max_power, begin);
      for (std::uint64_t i = begin; i < end; ++i, w.next()) {
        if (!detail::all_vanish(b, eqs, w)) continue;
        std::uint64_t idx = 0;
        for (std::size_t j = V.amb; j-- > 0;) idx = idx * lo.size() + down[w.index(j)];
        ++lifts[idx];
      }
      return lifts;
    });
  });
  std::vector<std::uint64_t> lifts(lo_total, 0);
  for (const auto& part : lift_parts)
    for (std::uint64_t i = 0; i < part.size(); ++i) lifts[i] += part[i];

  return with_backend(lo, opt.backend, [&](const auto& b) {
    using B = std::decay_t<decltype(b)>;
    std::vector<detail::CompiledPoly<B>> eqs;
    for (const auto& e : V.equations) eqs.push_back(detail::CompiledPoly<B>::compile(b, e));
    const auto max_power = detail::merged_max_power(V.amb, eqs);
    Histogram h;
    detail::TupleWalker<B> w(b, V.amb, max_power, 0);
    for (std::uint64_t i = 0; i < lo_total; ++i, w.next())
      if (detail::all_vanish(b, eqs, w)) ++h[lifts[i]];
    return h;
  });
}

enum class Example25Mode { Corrected, StrictPaper };

/**
 * Closed form for x^2 + y^2 = c over Z[sqrt(-5)] with f = x - a.
 *
 * Corrected mode gives the split-prime term weight m(p) whenever c - a^2 is
 * a square or zero mod p, and takes nu(p) to be the number of primes above p
 * dividing n. Strict mode keeps the printed gate (chi + 1)/2 and the printed
 * nu(p) = 2 iff (p) divides n.
 */
inline CountReport example25_count(const NumberRing& ring, const Integer& a, const Integer& c, const IdealHNF& n,
                                   Example25Mode mode) {
  if (ring.min_poly() != std::vector<Integer>{5, 0, 1})
    throw Error(Errc::NotQSqrtMinus5, "the closed form is stated for g = x^2+5 only");
  if (c == 0) throw Error(Errc::BadModulus, "c must be nonzero");
  const Integer N = n.norm();
  if (N == 1) throw Error(Errc::UnitIdeal, "modulus is the unit ideal");
  Integer g;
  mpz_gcd(g.get_mpz_t(), N.get_mpz_t(), Integer(2 * c).get_mpz_t());
  if (g != 1) throw Error(Errc::BadModulus, "gcd(N(n), 2c) = " + g.get_str() + " is not 1");

  const auto factors = factor_ideal(ring, n);
  std::map<Integer, std::vector<PrimeFactor>> by_p;
  for (const auto& P : factors) by_p[P.p].push_back(P);

  CountReport rep;
  rep.modulus_norm = N;
  rep.exponent = 1;
  Rational product = 1;
  for (const auto& [p, dividing] : by_p) {
    const auto split = factor_poly_mod_p(ring.min_poly(), p);
    const bool is_split = split.size() == 2;
    const bool is_ramified = split.size() == 1 && split[0].multiplicity == 2;
    const bool is_inert = !is_split && !is_ramified;
    if (p != 2 && p != 5) {
      const Integer r = p % 20;
      const bool mod20_split = r == 1 || r == 3 || r == 7 || r == 9;
      if (mod20_split != is_split)
        throw Error(Errc::FactorizationMismatch, "splitting of " + p.get_str() + " disagrees with p mod 20");
    }

    const Integer u = c - a * a;
    const int m = (u - a * a) % p == 0 ? 3 : (u % p == 0 ? 2 : 4);

    const PrimeFactor& P = dividing.front();
    const ResidueCtx field = ResidueCtx::prime(ring, P);
    const int chi = square_class(field, ring.from_integer(u));
    const int minus_one = square_class(field, ring.from_integer(-1));
    const Integer q = P.norm();

    int gate_m = 0;  // gate times m(p); always an integer
    if (is_inert || mode == Example25Mode::Corrected)
      gate_m = chi >= 0 ? m : 0;
    else
      gate_m = (chi + 1) * m / 2;

    for (const auto& Q : dividing) {
      Rational fac(q - minus_one - gate_m, q);
      fac.canonicalize();
      rep.locals.push_back(LocalData{Q, Integer(q - minus_one), Integer(gate_m), fac});
    }

    if (is_inert) {
      product *= Rational(Integer(q - 1 - m), q);
    } else if (is_ramified) {
      product *= Rational(Integer(q - 1 - gate_m), q);
    } else {
      unsigned nu = static_cast<unsigned>(dividing.size());
      if (mode == Example25Mode::StrictPaper) nu = ideal_contains(principal_ideal(ring, p), n) ? 2 : 1;
      Rational base(Integer(q - minus_one - gate_m), q);
      base.canonicalize();
      for (unsigned i = 0; i < nu; ++i) product *= base;
    }
    product.canonicalize();
  }
  rep.total = detail::to_integer(Rational(N) * product);
  return rep;
}

struct LangWeilRecord {
  Integer q;
  Integer count_X;
  Integer deviation;
  double bound = 0;
  std::size_t dimension = 0;
  unsigned ell = 1;
};

inline LangWeilRecord langweil_deviation(const NumberRing& ring, const VarietySpec& V, const PrimeFactor& P,
                                         const EnumOptions& opt = {}) {
  require_good_reduction(ring, V, P, opt);
  const MultiPoly any_f = MultiPoly::variable(ring, 1, 0);
  const LocalData ld = local_counts(ring, V, any_f, P, opt);
  LangWeilRecord r;
  r.q = P.norm();
  r.count_X = ld.count_X;
  r.dimension = V.amb - V.codim;
  r.ell = V.declared_degree;
  r.deviation = abs(Integer(ld.count_X - ipow(r.q, r.dimension)));
  const double q = r.q.get_d(), d = static_cast<double>(r.dimension), l = r.ell;
  r.bound = (l - 1) * (l - 2) * std::pow(q, d - 0.5) + 3 * l * std::pow(q, d - 1);
  return r;
}

struct AsymptRecord {
  std::string modulus;
  Integer N;
  Integer count;
  Rational ratio;
  std::size_t omega = 0;
  double sum_inv_sqrt = 0;
  double sum_inv = 0;
  double max_local_dev = 0;
};

struct AsymptSeries {
  std::vector<AsymptRecord> records;
  std::vector<std::string> notices;
};

/// "P3[x+1]*P7[x+3]^2" style label of a factorization.
inline std::string describe_factors(const std::vector<PrimeFactor>& factors) {
  std::string s;
  for (const auto& P : factors) {
    if (!s.empty()) s += "*";
    s += P.label();
    if (P.exponent > 1) s += "^" + std::to_string(P.exponent);
  }
  return s;
}

inline AsymptSeries asympt_series(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f,
                                  const std::vector<std::vector<PrimeFactor>>& family, const EnumOptions& opt = {}) {
  AsymptSeries out;
  for (const auto& member : family) {
    const std::string label = describe_factors(member);
    try {
      const CountReport rep = theorem1_count(ring, V, f, member, opt);
      AsymptRecord r;
      r.modulus = label;
      r.N = rep.modulus_norm;
      r.count = rep.total;
      r.ratio = Rational(rep.total, ipow(rep.modulus_norm, rep.exponent));
      r.ratio.canonicalize();
      r.omega = rep.locals.size();
      Rational worst = 0;
      for (const auto& ld : rep.locals) {
        const double q = ld.prime.norm().get_d();
        r.sum_inv_sqrt += 1.0 / std::sqrt(q);
        r.sum_inv += 1.0 / q;
        Rational dev = abs(Rational(ld.factor - 1));
        if (dev > worst) worst = dev;
      }
      r.max_local_dev = worst.get_d();
      out.records.push_back(std::move(r));
    } catch (const Error& e) {
      out.notices.push_back("skipped " + label + ": " + e.what());
    }
  }
  return out;
}

inline AsymptSeries asympt_series(const NumberRing& ring, const VarietySpec& V, const MultiPoly& f,
                                  const std::vector<IdealHNF>& family, const EnumOptions& opt = {}) {
  std::vector<std::vector<PrimeFactor>> factored;
  for (const auto& n : family) factored.push_back(factor_ideal(ring, n));
  return asympt_series(ring, V, f, factored, opt);
}

struct Family {
  std::vector<std::vector<PrimeFactor>> members;
  std::vector<std::string> notices;
};

/**
 * Prime ideals of norm <= max_norm with good reduction. products = 1 adds
 * their powers of norm <= max_norm; products = 2 further adds products of two
 * distinct such primes of norm <= max_norm.
 */
inline Family asympt_family(const NumberRing& ring, const VarietySpec& V, unsigned long max_norm, unsigned products,
                            const EnumOptions& opt = {}) {
  if (products > 2) throw Error(Errc::InvalidConfig, "products must be 0, 1 or 2");
  Family fam;
  std::vector<PrimeFactor> good;
  std::vector<char> composite(max_norm + 1, 0);
  for (unsigned long p = 2; p <= max_norm; ++p) {
    if (composite[p]) continue;
    for (unsigned long m = p * p; m <= max_norm; m += p) composite[m] = 1;
    for (auto P : primes_above(ring, Integer(p))) {
      if (P.norm() > Integer(max_norm)) continue;
      P.exponent = 1;
      try {
        auto rep = check_good_reduction(ring, V, P, opt);
        if (rep.ok)
          good.push_back(P);
        else
          fam.notices.push_back("skipped " + P.label() + ": bad reduction");
      } catch (const Error& e) {
        fam.notices.push_back("skipped " + P.label() + ": " + e.what());
      }
    }
  }
  const Integer B(max_norm);
  for (const auto& P : good) {
    fam.members.push_back({P});
    if (products < 1) continue;
    for (unsigned long e = 2; ipow(P.norm(), e) <= B; ++e) {
      PrimeFactor Q = P;
      Q.exponent = e;
      fam.members.push_back({Q});
    }
  }
  if (products >= 2)
    for (std::size_t i = 0; i < good.size(); ++i)
      for (std::size_t j = i + 1; j < good.size(); ++j)
        if (good[i].norm() * good[j].norm() <= B) fam.members.push_back({good[i], good[j]});
  return fam;
}

}  // namespace exunit
