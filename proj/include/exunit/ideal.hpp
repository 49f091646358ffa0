#pragma once

/**
 * @file ideal.hpp
 * @brief Integral ideals of Z[t] as full-rank lattices in Hermite Normal Form,
 * and prime factorization of ideals through the splitting of g mod p.
 *
 * HNF convention (lower triangular, rows are basis vectors):
 *   basis[i][j] == 0 for j > i,  basis[i][i] > 0,  0 <= basis[i][j] < basis[j][j] for j < i.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exunit/error.hpp"
#include "exunit/number_ring.hpp"

namespace exunit {

using Matrix = std::vector<std::vector<Integer>>;

class IdealHNF {
 public:
  /// Wraps an explicit basis after checking the HNF shape (not O_K-closure).
  static IdealHNF from_basis(Matrix rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw Error(Errc::InvalidHNF, "empty basis");
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw Error(Errc::InvalidHNF, "basis is not square");
      if (rows[i][i] <= 0) throw Error(Errc::InvalidHNF, "non-positive pivot in row " + std::to_string(i));
      for (std::size_t j = i + 1; j < n; ++j)
        if (rows[i][j] != 0) throw Error(Errc::InvalidHNF, "basis is not lower triangular");
      for (std::size_t j = 0; j < i; ++j)
        if (rows[i][j] < 0 || rows[i][j] >= rows[j][j])
          throw Error(Errc::InvalidHNF, "off-pivot entry not reduced");
    }
    return IdealHNF(std::move(rows));
  }

  const Matrix& basis() const { return rows_; }
  std::size_t degree() const { return rows_.size(); }
  const Integer& pivot(std::size_t i) const { return rows_[i][i]; }

  /// Index [O_K : I], the product of the pivots.
  Integer norm() const {
    Integer n = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) n *= rows_[i][i];
    return n;
  }

  RingElement row(std::size_t i) const { return RingElement{rows_[i]}; }

  friend bool operator==(const IdealHNF& a, const IdealHNF& b) { return a.rows_ == b.rows_; }

 private:
  explicit IdealHNF(Matrix rows) : rows_(std::move(rows)) {}
  Matrix rows_;
};

inline Integer ideal_norm(const IdealHNF& I) { return I.norm(); }

namespace detail {

/**
 * Lower-triangular HNF of the Z-span of `rows` (each of length n).
 *
 * When `modulus` is positive the caller guarantees modulus * Z^n lies in the
 * lattice; entries are then kept reduced modulo it.
 */
inline Matrix lattice_hnf(Matrix rows, std::size_t n, const Integer& modulus) {
  const bool reduce = modulus > 0;
  if (reduce)
    for (auto& r : rows)
      for (auto& c : r) c = floor_mod(c, modulus);
  Matrix basis(n, std::vector<Integer>(n, 0));
  for (std::size_t col = n; col-- > 0;) {
    // modulus * e_col joins only now, so reducing lower columns never erases it
    if (reduce) {
      std::vector<Integer> r(n, 0);
      r[col] = modulus;
      rows.push_back(std::move(r));
    }
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const std::vector<Integer>& r) {
                                return std::all_of(r.begin(), r.end(), [](const Integer& c) { return c == 0; });
                              }),
               rows.end());
    // Euclid on column `col` until a single row carries a nonzero entry.
    while (true) {
      std::size_t piv = rows.size();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (piv == rows.size() || abs(rows[i][col]) < abs(rows[piv][col])) piv = i;
      }
      if (piv == rows.size()) throw Error(Errc::NotFullRank, "lattice determinant is zero");
      bool done = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == piv || rows[i][col] == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[piv][col].get_mpz_t());
        for (std::size_t j = 0; j <= col; ++j) rows[i][j] -= q * rows[piv][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) {
        std::vector<Integer> p = std::move(rows[piv]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv));
        if (p[col] < 0)
          for (auto& c : p) c = -c;
        basis[col] = std::move(p);
        break;
      }
    }
    if (reduce)
      for (auto& r : rows)
        for (std::size_t j = 0; j < col; ++j) r[j] = floor_mod(r[j], modulus);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j-- > 0;) {
      Integer q = floor_div(basis[i][j], basis[j][j]);
      if (q == 0) continue;
      for (std::size_t k = 0; k <= j; ++k) basis[i][k] -= q * basis[j][k];
    }
  }
  return basis;
}

inline RingElement eval_at_theta(const NumberRing& ring, const std::vector<Integer>& h) {
  RingElement acc = ring.zero();
  const RingElement t = ring.theta();
  for (auto it = h.rbegin(); it != h.rend(); ++it) acc = ring.add(ring.mul(acc, t), ring.from_integer(*it));
  return acc;
}

}  // namespace detail

/// HNF of the ideal generated by `gens`: the Z-span of t^j * gen.
inline IdealHNF hnf_from_generators(const NumberRing& ring, const std::vector<RingElement>& gens) {
  const std::size_t n = ring.degree();
  Matrix rows;
  Integer modulus = 0;
  bool any_nonzero = false;
  const RingElement t = ring.theta();
  for (const auto& g : gens) {
    ring.check(g);
    if (g.is_zero()) continue;
    any_nonzero = true;
    // N(g) lies in (g): it is g times the adjugate, a polynomial in g.
    Integer nm = abs(ring.norm(g));
    if (nm != 0) modulus = modulus == 0 ? nm : Integer(gcd(modulus, nm));
    RingElement cur = g;
    for (std::size_t j = 0; j < n; ++j) {
      rows.push_back(cur.coords);
      if (j + 1 < n) cur = ring.mul(cur, t);
    }
  }
  if (!any_nonzero) throw Error(Errc::ZeroIdeal, "all generators are zero");
  return IdealHNF::from_basis(detail::lattice_hnf(std::move(rows), n, modulus));
}

inline IdealHNF unit_ideal(const NumberRing& ring) { return hnf_from_generators(ring, {ring.one()}); }

inline IdealHNF principal_ideal(const NumberRing& ring, const Integer& v) {
  return hnf_from_generators(ring, {ring.from_integer(v)});
}

/// Membership by back-substitution on the triangular basis.
inline bool ideal_contains(const IdealHNF& I, const RingElement& a) {
  const std::size_t n = I.degree();
  if (a.size() != n) throw Error(Errc::DimensionMismatch, "element/ideal dimension mismatch");
  std::vector<Integer> v = a.coords;
  for (std::size_t i = n; i-- > 0;) {
    if (v[i] == 0) continue;
    if (!mpz_divisible_p(v[i].get_mpz_t(), I.pivot(i).get_mpz_t())) return false;
    Integer q = v[i] / I.pivot(i);
    for (std::size_t j = 0; j <= i; ++j) v[j] -= q * I.basis()[i][j];
  }
  return true;
}

/// True iff J is a subset of I.
inline bool ideal_contains(const IdealHNF& I, const IdealHNF& J) {
  for (std::size_t i = 0; i < J.degree(); ++i)
    if (!ideal_contains(I, J.row(i))) return false;
  return true;
}

/// Closure of the lattice under multiplication by t.
inline bool is_module_closed(const NumberRing& ring, const IdealHNF& I) {
  const RingElement t = ring.theta();
  for (std::size_t i = 0; i < I.degree(); ++i)
    if (!ideal_contains(I, ring.mul(t, I.row(i)))) return false;
  return true;
}

inline IdealHNF ideal_mul(const NumberRing& ring, const IdealHNF& I, const IdealHNF& J) {
  const std::size_t n = ring.degree();
  Matrix rows;
  rows.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows.push_back(ring.mul(I.row(i), J.row(j)).coords);
  return IdealHNF::from_basis(detail::lattice_hnf(std::move(rows), n, I.norm() * J.norm()));
}

inline IdealHNF ideal_pow(const NumberRing& ring, IdealHNF base, std::uint64_t e) {
  IdealHNF r = unit_ideal(ring);
  while (e) {
    if (e & 1) r = ideal_mul(ring, r, base);
    e >>= 1;
    if (e) base = ideal_mul(ring, base, base);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (dense, constant term first).

namespace detail {

using FpPoly = std::vector<std::int64_t>;

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

inline void fp_trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Divides f by monic h in place; returns true and stores the quotient in f
// if the remainder is zero, otherwise leaves f untouched.
inline bool fp_divide_exact(FpPoly& f, const FpPoly& h, std::int64_t p) {
  if (f.size() < h.size()) return false;
  FpPoly r = f;
  FpPoly q(f.size() - h.size() + 1, 0);
  const std::size_t dh = h.size() - 1;
  for (std::size_t k = q.size(); k-- > 0;) {
    std::int64_t c = r[k + dh];
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dh; ++i) r[k + i] = ((r[k + i] - mulmod(c, h[i], p)) % p + p) % p;
  }
  fp_trim(r);
  if (!r.empty()) return false;
  f = std::move(q);
  return true;
}

}  // namespace detail

struct PolyFactorModP {
  std::vector<Integer> factor;  // monic, coefficients in [0, p), constant first
  unsigned multiplicity = 0;
};

/// Search budget for factor_poly_mod_p: at most this many candidate divisors
/// per degree.
inline constexpr std::uint64_t kFactorSearchCap = 100'000'000;

/**
 * Complete factorization of a monic integer polynomial modulo a prime p, by
 * trial division over all monic candidates of degree <= deg/2. Factors are
 * sorted lexicographically by coefficient sequence.
 */
inline std::vector<PolyFactorModP> factor_poly_mod_p(const std::vector<Integer>& poly, const Integer& p_big) {
  if (poly.size() < 2 || poly.back() != 1) throw Error(Errc::NotMonic, "factor_poly_mod_p needs a monic polynomial");
  if (!p_big.fits_slong_p() || p_big > (Integer(1) << 40))
    throw Error(Errc::FactorCapExceeded, "prime " + p_big.get_str() + " too large for trial factorization");
  const std::int64_t p = p_big.get_si();
  detail::FpPoly f;
  for (const auto& c : poly) f.push_back(floor_mod(c, p_big).get_si());
  std::vector<std::pair<detail::FpPoly, unsigned>> found;
  for (std::size_t d = 1; 2 * d <= f.size() - 1; ++d) {
    Integer count = ipow(p_big, d);
    if (count > kFactorSearchCap)
      throw Error(Errc::FactorCapExceeded, "trial factorization mod " + p_big.get_str() + " exceeds search cap");
    detail::FpPoly h(d + 1, 0);
    h[d] = 1;
    const std::uint64_t total = count.get_ui();
    for (std::uint64_t it = 0; it < total && 2 * d <= f.size() - 1; ++it) {
      unsigned mult = 0;
      while (detail::fp_divide_exact(f, h, p)) ++mult;
      if (mult) found.emplace_back(h, mult);
      // odometer over coefficients h[0..d-1]
      for (std::size_t i = 0; i < d; ++i) {
        if (++h[i] < p) break;
        h[i] = 0;
      }
    }
  }
  if (f.size() > 1) found.emplace_back(f, 1);
  std::sort(found.begin(), found.end());
  std::vector<PolyFactorModP> out;
  for (auto& [h, m] : found) {
    PolyFactorModP pf;
    for (auto c : h) pf.factor.emplace_back(static_cast<long>(c));
    pf.multiplicity = m;
    out.push_back(std::move(pf));
  }
  return out;
}

/// Renders an integer polynomial in x, e.g. "x^2+5".
inline std::string format_univariate(const std::vector<Integer>& h) {
  std::string s;
  for (std::size_t k = h.size(); k-- > 0;) {
    const Integer& c = h[k];
    if (c == 0) continue;
    Integer a = abs(c);
    if (!s.empty() || c < 0) s += c < 0 ? "-" : "+";
    if (k == 0 || a != 1) s += a.get_str();
    if (k >= 1) s += "x";
    if (k >= 2) s += "^" + std::to_string(k);
  }
  return s.empty() ? "0" : s;
}

/// One prime ideal p = (p, h(t)) together with the exponent of a factored ideal.
struct PrimeFactor {
  Integer p;
  std::vector<Integer> h;
  unsigned e_ram = 0;
  unsigned f_res = 0;
  unsigned exponent = 0;
  IdealHNF hnf;

  Integer norm() const { return ipow(p, f_res); }
  /// Comma-free label such as "P3[x+1]".
  std::string label() const { return "P" + p.get_str() + "[" + format_univariate(h) + "]"; }
};

/// Builds the prime (p, h(t)); h must reduce to an irreducible factor of g mod p.
inline PrimeFactor make_prime_factor(const NumberRing& ring, const Integer& p, const std::vector<Integer>& h,
                                     unsigned exponent) {
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
    throw Error(Errc::NotPrime, p.get_str() + " is not a rational prime");
  std::vector<Integer> hr;
  for (const auto& c : h) hr.push_back(floor_mod(c, p));
  while (!hr.empty() && hr.back() == 0) hr.pop_back();
  for (const auto& fac : factor_poly_mod_p(ring.min_poly(), p)) {
    if (fac.factor != hr) continue;
    std::vector<RingElement> gens{ring.from_integer(p), detail::eval_at_theta(ring, fac.factor)};
    PrimeFactor pf{p, fac.factor, fac.multiplicity, static_cast<unsigned>(fac.factor.size() - 1), exponent,
                   hnf_from_generators(ring, gens)};
    if (pf.hnf.norm() != pf.norm())
      throw Error(Errc::FactorizationMismatch, "norm of " + pf.label() + " is not p^f");
    return pf;
  }
  throw Error(Errc::NotIrreducibleFactor, format_univariate(h) + " is not an irreducible factor of g mod " + p.get_str());
}

/// All primes above p; exponent is set to the ramification index.
inline std::vector<PrimeFactor> primes_above(const NumberRing& ring, const Integer& p) {
  std::vector<PrimeFactor> out;
  for (const auto& fac : factor_poly_mod_p(ring.min_poly(), p)) {
    std::vector<RingElement> gens{ring.from_integer(p), detail::eval_at_theta(ring, fac.factor)};
    out.push_back(PrimeFactor{p, fac.factor, fac.multiplicity, static_cast<unsigned>(fac.factor.size() - 1),
                              fac.multiplicity, hnf_from_generators(ring, gens)});
  }
  return out;
}

inline constexpr long kTrialDivisionLimit = 1'000'000;

/// Trial division by all d <= 10^6; a cofactor above 10^12 cannot be
/// certified prime this way and raises FactorCapExceeded.
inline std::vector<std::pair<Integer, unsigned>> factor_integer(Integer n) {
  std::vector<std::pair<Integer, unsigned>> out;
  n = abs(n);
  for (long d = 2; d <= kTrialDivisionLimit && Integer(d) * d <= n; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(Integer(d), e);
  }
  if (n > 1) {
    if (n > Integer(kTrialDivisionLimit) * kTrialDivisionLimit)
      throw Error(Errc::FactorCapExceeded, "cofactor " + n.get_str() + " exceeds the trial-division cap");
    out.emplace_back(n, 1);
  }
  return out;
}

inline IdealHNF ideal_from_factors(const NumberRing& ring, const std::vector<PrimeFactor>& factors) {
  IdealHNF acc = unit_ideal(ring);
  for (const auto& pf : factors) acc = ideal_mul(ring, acc, ideal_pow(ring, pf.hnf, pf.exponent));
  return acc;
}

/**
 * Prime ideal factorization of a proper ideal I. For every p | N(I) the
 * candidate primes come from the factorization of g mod p; the exponent of
 * each is the largest k with I contained in P^k. The product of the result is
 * checked against I.
 */
inline std::vector<PrimeFactor> factor_ideal(const NumberRing& ring, const IdealHNF& I) {
  const Integer N = I.norm();
  if (N == 1) throw Error(Errc::UnitIdeal, "cannot factor the unit ideal");
  std::vector<PrimeFactor> out;
  for (const auto& [p, v] : factor_integer(N)) {
    for (auto pf : primes_above(ring, p)) {
      const unsigned max_k = v / pf.f_res;
      unsigned k = 0;
      IdealHNF power = pf.hnf;
      while (k < max_k && ideal_contains(power, I)) {
        ++k;
        if (k < max_k) power = ideal_mul(ring, power, pf.hnf);
      }
      if (k == 0) continue;
      pf.exponent = k;
      out.push_back(std::move(pf));
    }
  }
  if (!(ideal_from_factors(ring, out) == I))
    throw Error(Errc::FactorizationMismatch,
                "prime factors do not reassemble the ideal (is Z[t] the maximal order?)");
  return out;
}

}  // namespace exunit
