#pragma once

/**
 * @file number_ring.hpp
 * @brief Arithmetic in a monogenic order Z[t], t a root of a monic integer
 * polynomial g.
 *
 * Elements are stored as integer coordinate vectors in the power basis
 * 1, t, ..., t^(n-1). The caller asserts that Z[t] is the full ring of
 * integers of Q(t); nothing here tries to compute a maximal order.
 */

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exunit/error.hpp"

namespace exunit {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer floor_mod(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline std::string to_string(const Integer& v) { return v.get_str(); }

/// An element of Z[t]; coords[i] is the coefficient of t^i.
struct RingElement {
  std::vector<Integer> coords;

  std::size_t size() const { return coords.size(); }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Integer& c) { return c == 0; });
  }
  friend bool operator==(const RingElement& a, const RingElement& b) { return a.coords == b.coords; }
  friend bool operator<(const RingElement& a, const RingElement& b) { return a.coords < b.coords; }
};

inline std::string to_string(const RingElement& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    if (i) s += ",";
    s += a.coords[i].get_str();
  }
  return s + "]";
}

namespace detail {

// Fraction-free Gaussian elimination (Bareiss).
inline Integer bareiss_det(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(t);
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Positive divisors of |v| by trial division; v != 0.
inline std::vector<Integer> divisors(const Integer& v) {
  Integer a = abs(v);
  std::vector<Integer> lo, hi;
  for (Integer i = 1; i * i <= a; ++i) {
    if (mpz_divisible_p(a.get_mpz_t(), i.get_mpz_t())) {
      lo.push_back(i);
      Integer other = a / i;
      if (other != i) hi.push_back(std::move(other));
    }
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

}  // namespace detail

/**
 * The order Z[t] with t a root of the monic polynomial min_poly
 * (coefficients constant term first). Immutable once built.
 */
class NumberRing {
 public:
  /// Validates monicity and (partially) irreducibility of g.
  ///
  /// g must have no integer root; for degree <= 3 that is equivalent to
  /// irreducibility over Z. For higher degree irreducibility is taken on trust.
  static NumberRing make(std::vector<Integer> min_poly) {
    if (min_poly.empty()) throw Error(Errc::ZeroDegree, "empty defining polynomial");
    if (min_poly.back() != 1) throw Error(Errc::NotMonic, "leading coefficient must be 1");
    if (min_poly.size() == 1) throw Error(Errc::ZeroDegree, "defining polynomial is constant");
    NumberRing r(std::move(min_poly));
    if (r.degree() >= 2) {
      const Integer& c0 = r.g_[0];
      if (c0 == 0) throw Error(Errc::Reducible, "x divides the defining polynomial");
      for (const Integer& d : detail::divisors(c0)) {
        for (const Integer& root : {Integer(d), Integer(-d)}) {
          if (r.eval_min_poly(root) == 0)
            throw Error(Errc::Reducible, "integer root " + root.get_str());
        }
      }
    }
    return r;
  }

  std::size_t degree() const { return g_.size() - 1; }
  const std::vector<Integer>& min_poly() const { return g_; }

  Integer eval_min_poly(const Integer& x) const {
    Integer acc = 0;
    for (auto it = g_.rbegin(); it != g_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RingElement zero() const { return RingElement{std::vector<Integer>(degree(), 0)}; }
  RingElement from_integer(const Integer& v) const {
    RingElement r = zero();
    r.coords[0] = v;
    return r;
  }
  RingElement one() const { return from_integer(1); }
  /// The generator t.
  RingElement theta() const {
    if (degree() == 1) return from_integer(-g_[0]);
    RingElement r = zero();
    r.coords[1] = 1;
    return r;
  }

  void check(const RingElement& a) const {
    if (a.size() != degree())
      throw Error(Errc::DimensionMismatch, "element has " + std::to_string(a.size()) +
                                               " coordinates, ring degree is " +
                                               std::to_string(degree()));
  }

  RingElement add(const RingElement& a, const RingElement& b) const {
    check(a);
    check(b);
    RingElement r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.coords[i] += b.coords[i];
    return r;
  }

  RingElement sub(const RingElement& a, const RingElement& b) const {
    check(a);
    check(b);
    RingElement r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
  }

  RingElement neg(const RingElement& a) const {
    check(a);
    RingElement r = a;
    for (auto& c : r.coords) c = -c;
    return r;
  }

  RingElement scale(const RingElement& a, const Integer& k) const {
    check(a);
    RingElement r = a;
    for (auto& c : r.coords) c *= k;
    return r;
  }

  /// Schoolbook product followed by folding t^k (k >= n) back with g(t) = 0.
  RingElement mul(const RingElement& a, const RingElement& b) const {
    check(a);
    check(b);
    const std::size_t n = degree();
    std::vector<Integer> prod(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coords[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) prod[i + j] += a.coords[i] * b.coords[j];
    }
    for (std::size_t k = 2 * n - 1; k-- > n;) {
      if (prod[k] == 0) continue;
      Integer c = prod[k];
      prod[k] = 0;
      for (std::size_t i = 0; i < n; ++i) prod[k - n + i] -= c * g_[i];
    }
    prod.resize(n);
    return RingElement{std::move(prod)};
  }

  RingElement pow(RingElement base, std::uint64_t e) const {
    RingElement r = one();
    while (e) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return r;
  }

  /// Column j holds the coordinates of a * t^j.
  std::vector<std::vector<Integer>> multiplication_matrix(const RingElement& a) const {
    check(a);
    const std::size_t n = degree();
    std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
    RingElement col = a;
    const RingElement t = theta();
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) m[i][j] = col.coords[i];
      if (j + 1 < n) col = mul(col, t);
    }
    return m;
  }

  Integer norm(const RingElement& a) const { return detail::bareiss_det(multiplication_matrix(a)); }

  friend bool operator==(const NumberRing& a, const NumberRing& b) { return a.g_ == b.g_; }

 private:
  explicit NumberRing(std::vector<Integer> g) : g_(std::move(g)) {}
  std::vector<Integer> g_;
};

inline NumberRing make_number_ring(std::vector<Integer> min_poly) {
  return NumberRing::make(std::move(min_poly));
}

inline NumberRing make_number_ring(std::initializer_list<long> min_poly) {
  std::vector<Integer> g;
  for (long c : min_poly) g.emplace_back(c);
  return NumberRing::make(std::move(g));
}

inline RingElement make_element(std::initializer_list<long> coords) {
  RingElement r;
  for (long c : coords) r.coords.emplace_back(c);
  return r;
}

/// Parses "[c0,c1,...]" (exactly degree() entries) or a bare integer n,
/// shorthand for [n,0,...,0].
inline RingElement parse_element(std::string_view text, const NumberRing& ring) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto parse_int = [&](const std::string& tok) {
    Integer v;
    std::size_t start = (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) ? 1 : 0;
    if (tok.size() == start ||
        !std::all_of(tok.begin() + start, tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw Error(Errc::SyntaxError, "bad integer '" + tok + "' in element literal");
    v.set_str(tok[0] == '+' ? tok.substr(1) : tok, 10);
    return v;
  };
  if (s.empty()) throw Error(Errc::SyntaxError, "empty element literal");
  if (s.front() != '[') return ring.from_integer(parse_int(s));
  if (s.back() != ']') throw Error(Errc::SyntaxError, "unterminated element literal");
  RingElement r;
  std::string body = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = body.find(',', pos);
    r.coords.push_back(parse_int(body.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  ring.check(r);
  return r;
}

}  // namespace exunit
