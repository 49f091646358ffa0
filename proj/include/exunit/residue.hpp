#pragma once

/**
 * @file residue.hpp
 * @brief The finite ring O_K/n: canonical representatives, enumeration, unit
 * tests, and residue-field inversion and quadratic characters.
 *
 * Two interchangeable arithmetic backends are provided:
 *   - ResidueCtx:   exact GMP arithmetic in O_K followed by reduce_mod;
 *   - FastResidue:  the same canonical representatives held in machine
 *                   words, usable when N(n) < 2^40 and [K:Q] <= 8.
 * Generic enumeration and counting code is written against the
 * ResidueBackend concept and gives identical results with either.
 */

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "exunit/error.hpp"
#include "exunit/ideal.hpp"
#include "exunit/number_ring.hpp"

namespace exunit {

class ResidueCtx {
 public:
  using elem = RingElement;

  ResidueCtx(NumberRing ring, IdealHNF modulus) : ring_(std::move(ring)), modulus_(std::move(modulus)) {
    if (modulus_.degree() != ring_.degree())
      throw Error(Errc::DimensionMismatch, "modulus dimension differs from ring degree");
    norm_ = modulus_.norm();
    if (norm_ < 2) throw Error(Errc::UnitIdeal, "residue ring modulo the unit ideal is the zero ring");
  }

  /// Residue field O_K/P for a prime built by make_prime_factor/factor_ideal.
  static ResidueCtx prime(const NumberRing& ring, const PrimeFactor& pf) {
    ResidueCtx ctx(ring, pf.hnf);
    ctx.prime_ = true;
    return ctx;
  }

  const NumberRing& ring() const { return ring_; }
  const IdealHNF& modulus() const { return modulus_; }
  const Integer& norm() const { return norm_; }
  bool is_prime() const { return prime_; }

  /// Canonical representative: 0 <= coords[i] < pivot(i).
  RingElement reduce(RingElement a) const {
    ring_.check(a);
    const auto& b = modulus_.basis();
    for (std::size_t i = a.size(); i-- > 0;) {
      Integer q = floor_div(a.coords[i], b[i][i]);
      if (q == 0) continue;
      for (std::size_t j = 0; j <= i; ++j) a.coords[j] -= q * b[i][j];
    }
    return a;
  }

  // --- backend interface -------------------------------------------------
  std::uint64_t size() const {
    if (!norm_.fits_ulong_p()) throw Error(Errc::CapExceeded, "residue ring too large to enumerate");
    return norm_.get_ui();
  }

  /// The idx-th representative; c0 varies fastest.
  RingElement at(std::uint64_t idx) const {
    RingElement r = ring_.zero();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Integer& d = modulus_.pivot(i);
      Integer q = Integer(static_cast<unsigned long>(idx)) / d;
      r.coords[i] = Integer(static_cast<unsigned long>(idx)) - q * d;
      idx = q.get_ui();
    }
    return r;
  }

  std::uint64_t index_of(const RingElement& a) const {
    Integer idx = 0;
    for (std::size_t i = a.size(); i-- > 0;) idx = idx * modulus_.pivot(i) + a.coords[i];
    return idx.get_ui();
  }

  RingElement zero() const { return ring_.zero(); }
  RingElement one() const { return reduce(ring_.one()); }
  RingElement from(const RingElement& a) const { return reduce(a); }
  RingElement to_element(const RingElement& a) const { return a; }
  RingElement add(const RingElement& a, const RingElement& b) const { return reduce(ring_.add(a, b)); }
  RingElement sub(const RingElement& a, const RingElement& b) const { return reduce(ring_.sub(a, b)); }
  RingElement neg(const RingElement& a) const { return reduce(ring_.neg(a)); }
  RingElement mul(const RingElement& a, const RingElement& b) const { return reduce(ring_.mul(a, b)); }
  bool is_zero(const RingElement& a) const { return reduce(a).is_zero(); }

  /// (a) + n == O_K.
  bool is_unit(const RingElement& a) const {
    std::vector<RingElement> gens;
    for (std::size_t i = 0; i < modulus_.degree(); ++i) gens.push_back(modulus_.row(i));
    gens.push_back(a);
    return hnf_from_generators(ring_, gens).norm() == 1;
  }

  RingElement pow(RingElement base, Integer e) const {
    RingElement r = one();
    base = reduce(std::move(base));
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
      e >>= 1;
      if (e > 0) base = mul(base, base);
    }
    return r;
  }

  /// a^(q-2) in the residue field O_K/P.
  RingElement inverse(const RingElement& a) const {
    if (!prime_) throw Error(Errc::NotPrime, "field_inverse needs a prime modulus");
    if (is_zero(a)) throw Error(Errc::NotAUnit, "zero has no inverse");
    return pow(a, norm_ - 2);
  }

 private:
  NumberRing ring_;
  IdealHNF modulus_;
  Integer norm_;
  bool prime_ = false;
};

inline RingElement reduce_mod(const ResidueCtx& ctx, const RingElement& a) { return ctx.reduce(a); }
inline bool is_unit_mod(const ResidueCtx& ctx, const RingElement& a) { return ctx.is_unit(a); }
inline RingElement field_inverse(const ResidueCtx& ctx, const RingElement& a) { return ctx.inverse(a); }

/// All canonical representatives in enumeration order (c_{n-1}, ..., c_0) lexicographic.
inline std::vector<RingElement> enumerate_residues(const ResidueCtx& ctx) {
  std::vector<RingElement> out;
  const std::uint64_t n = ctx.size();
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(ctx.at(i));
  return out;
}

/// Representatives with index in [begin, end), for partitioned consumption.
inline std::vector<RingElement> enumerate_residues(const ResidueCtx& ctx, std::uint64_t begin, std::uint64_t end) {
  std::vector<RingElement> out;
  end = std::min(end, ctx.size());
  for (std::uint64_t i = begin; i < end; ++i) out.push_back(ctx.at(i));
  return out;
}

/// Euler's criterion in an odd residue field: -1, 0 or +1.
inline int square_class(const ResidueCtx& ctx, const RingElement& a) {
  if (!ctx.is_prime()) throw Error(Errc::NotPrime, "square_class needs a prime modulus");
  if (mpz_even_p(ctx.norm().get_mpz_t())) throw Error(Errc::EvenCharacteristic, "residue field of even order");
  RingElement r = ctx.reduce(a);
  if (r.is_zero()) return 0;
  RingElement e = ctx.pow(r, (ctx.norm() - 1) / 2);
  return e == ctx.one() ? 1 : -1;
}

// ---------------------------------------------------------------------------

/// Canonical representative stored in machine words.
struct SmallElem {
  static constexpr std::size_t kMaxDegree = 8;
  std::array<std::int64_t, kMaxDegree> c{};
  friend bool operator==(const SmallElem&, const SmallElem&) = default;
};

class FastResidue {
 public:
  using elem = SmallElem;

  static bool fits(const ResidueCtx& ctx) {
    return ctx.ring().degree() <= SmallElem::kMaxDegree && ctx.norm() < (Integer(1) << 40);
  }

  explicit FastResidue(const ResidueCtx& ctx) : exact_(ctx) {
    if (!fits(ctx)) throw Error(Errc::CapExceeded, "modulus too large for the word-size backend");
    n_ = ctx.ring().degree();
    N_ = static_cast<std::int64_t>(ctx.norm().get_si());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j <= i; ++j) basis_[i][j] = ctx.modulus().basis()[i][j].get_si();
    // reduced t^k for n <= k <= 2n-2
    const NumberRing& ring = ctx.ring();
    RingElement tk = ring.pow(ring.theta(), n_);
    for (std::size_t k = n_; k + 1 < 2 * n_; ++k) {
      theta_pow_[k - n_] = from(tk);
      tk = ring.mul(tk, ring.theta());
    }
    one_ = from(ring.one());
    prime_ = ctx.is_prime();
  }

  const ResidueCtx& exact() const { return exact_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(N_); }

  SmallElem at(std::uint64_t idx) const {
    SmallElem r;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto d = static_cast<std::uint64_t>(basis_[i][i]);
      r.c[i] = static_cast<std::int64_t>(idx % d);
      idx /= d;
    }
    return r;
  }

  std::uint64_t index_of(const SmallElem& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = n_; i-- > 0;) idx = idx * static_cast<std::uint64_t>(basis_[i][i]) + a.c[i];
    return idx;
  }

  SmallElem zero() const { return SmallElem{}; }
  SmallElem one() const { return one_; }

  SmallElem from(const RingElement& a) const {
    RingElement r = exact_.reduce(a);
    SmallElem s;
    for (std::size_t i = 0; i < n_; ++i) s.c[i] = r.coords[i].get_si();
    return s;
  }

  RingElement to_element(const SmallElem& a) const {
    RingElement r = exact_.ring().zero();
    for (std::size_t i = 0; i < n_; ++i) r.coords[i] = static_cast<long>(a.c[i]);
    return r;
  }

  SmallElem add(const SmallElem& a, const SmallElem& b) const {
    std::array<__int128, SmallElem::kMaxDegree> v{};
    for (std::size_t i = 0; i < n_; ++i) v[i] = a.c[i] + b.c[i];
    return finish(v);
  }

  SmallElem sub(const SmallElem& a, const SmallElem& b) const {
    std::array<__int128, SmallElem::kMaxDegree> v{};
    for (std::size_t i = 0; i < n_; ++i) v[i] = a.c[i] - b.c[i];
    return finish(v);
  }

  SmallElem neg(const SmallElem& a) const { return sub(zero(), a); }

  SmallElem mul(const SmallElem& a, const SmallElem& b) const {
    std::array<__int128, 2 * SmallElem::kMaxDegree> prod{};
    for (std::size_t i = 0; i < n_; ++i) {
      if (a.c[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) prod[i + j] += static_cast<__int128>(a.c[i]) * b.c[j];
    }
    std::array<__int128, SmallElem::kMaxDegree> v{};
    // N * O_K lies in the modulus, so every integer coefficient may be taken mod N.
    for (std::size_t i = 0; i < n_; ++i) v[i] = prod[i] % N_;
    for (std::size_t k = n_; k + 1 < 2 * n_; ++k) {
      const __int128 ck = prod[k] % N_;
      if (ck == 0) continue;
      const SmallElem& tk = theta_pow_[k - n_];
      for (std::size_t i = 0; i < n_; ++i) v[i] += ck * tk.c[i];
    }
    return finish(v);
  }

  bool is_zero(const SmallElem& a) const { return a == SmallElem{}; }

  /// (a) + n == O_K, via a word-size HNF of the modulus rows and a*t^j.
  bool is_unit(const SmallElem& a) const {
    if (prime_) return !is_zero(a);
    std::vector<std::array<__int128, SmallElem::kMaxDegree>> rows;
    SmallElem cur = a;
    SmallElem t = theta_small();
    for (std::size_t j = 0; j < n_; ++j) {
      std::array<__int128, SmallElem::kMaxDegree> r{};
      for (std::size_t i = 0; i < n_; ++i) r[i] = cur.c[i];
      rows.push_back(r);
      if (j + 1 < n_) cur = mul(cur, t);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      std::array<__int128, SmallElem::kMaxDegree> r{};
      for (std::size_t j = 0; j <= i; ++j) r[j] = basis_[i][j];
      rows.push_back(r);
      std::array<__int128, SmallElem::kMaxDegree> m{};
      m[i] = N_;
      rows.push_back(m);
    }
    __int128 det = 1;
    for (std::size_t col = n_; col-- > 0;) {
      while (true) {
        std::size_t piv = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i][col] == 0) continue;
          if (piv == rows.size() || abs128(rows[i][col]) < abs128(rows[piv][col])) piv = i;
        }
        if (piv == rows.size()) return false;
        bool done = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i == piv || rows[i][col] == 0) continue;
          const __int128 q = rows[i][col] / rows[piv][col];
          rows[i][col] -= q * rows[piv][col];
          // N*e_j for j < col is still among the rows, so lower columns may be taken mod N
          for (std::size_t j = 0; j < col; ++j) rows[i][j] = (rows[i][j] - q * rows[piv][j]) % N_;
          if (rows[i][col] != 0) done = false;
        }
        if (done) {
          det *= abs128(rows[piv][col]);
          if (det != 1) return false;
          rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv));
          break;
        }
      }
    }
    return det == 1;
  }

  SmallElem pow(SmallElem base, Integer e) const {
    SmallElem r = one_;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
      e >>= 1;
      if (e > 0) base = mul(base, base);
    }
    return r;
  }

  SmallElem inverse(const SmallElem& a) const {
    if (!prime_) throw Error(Errc::NotPrime, "field_inverse needs a prime modulus");
    if (is_zero(a)) throw Error(Errc::NotAUnit, "zero has no inverse");
    return pow(a, exact_.norm() - 2);
  }

 private:
  static __int128 abs128(__int128 v) { return v < 0 ? -v : v; }

  SmallElem theta_small() const { return from(exact_.ring().theta()); }

  // Back-substitution on the triangular basis; entries are first taken mod N.
  SmallElem finish(std::array<__int128, SmallElem::kMaxDegree>& v) const {
    for (std::size_t i = n_; i-- > 0;) {
      __int128 x = v[i] % N_;
      if (x < 0) x += N_;
      const std::int64_t d = basis_[i][i];
      const __int128 q = x / d;
      v[i] = x - q * d;
      if (q != 0)
        for (std::size_t j = 0; j < i; ++j) v[j] -= q * basis_[i][j];
    }
    SmallElem s;
    for (std::size_t i = 0; i < n_; ++i) s.c[i] = static_cast<std::int64_t>(v[i]);
    return s;
  }

  ResidueCtx exact_;
  std::size_t n_ = 0;
  std::int64_t N_ = 0;
  std::array<std::array<std::int64_t, SmallElem::kMaxDegree>, SmallElem::kMaxDegree> basis_{};
  std::array<SmallElem, SmallElem::kMaxDegree> theta_pow_{};
  SmallElem one_{};
  bool prime_ = false;
};

template <class B>
concept ResidueBackend = requires(const B& b, const typename B::elem& x, std::uint64_t i, const RingElement& r) {
  { b.size() } -> std::convertible_to<std::uint64_t>;
  { b.at(i) } -> std::same_as<typename B::elem>;
  { b.index_of(x) } -> std::convertible_to<std::uint64_t>;
  { b.zero() } -> std::same_as<typename B::elem>;
  { b.one() } -> std::same_as<typename B::elem>;
  { b.from(r) } -> std::same_as<typename B::elem>;
  { b.to_element(x) } -> std::same_as<RingElement>;
  { b.add(x, x) } -> std::same_as<typename B::elem>;
  { b.sub(x, x) } -> std::same_as<typename B::elem>;
  { b.mul(x, x) } -> std::same_as<typename B::elem>;
  { b.is_zero(x) } -> std::convertible_to<bool>;
  { b.is_unit(x) } -> std::convertible_to<bool>;
  { b.inverse(x) } -> std::same_as<typename B::elem>;
};

static_assert(ResidueBackend<ResidueCtx>);
static_assert(ResidueBackend<FastResidue>);

}  // namespace exunit
