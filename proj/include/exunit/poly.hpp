#pragma once

/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials with coefficients in Z[t].
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "exunit/error.hpp"
#include "exunit/number_ring.hpp"

namespace exunit {

using Exponents = std::vector<std::uint32_t>;

/// Term map exponent-vector -> coefficient; zero coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(std::size_t amb = 1) : amb_(amb) {}

  static MultiPoly constant(std::size_t amb, const RingElement& c) {
    MultiPoly p(amb);
    p.add_term(Exponents(amb, 0), c);
    return p;
  }

  /// x_{var+1}, i.e. var is 0-based.
  static MultiPoly variable(const NumberRing& ring, std::size_t amb, std::size_t var) {
    MultiPoly p(amb);
    Exponents e(amb, 0);
    e.at(var) = 1;
    p.add_term(e, ring.one());
    return p;
  }

  std::size_t amb() const { return amb_; }
  const std::map<Exponents, RingElement>& terms() const { return terms_; }

  void add_term(const Exponents& e, const RingElement& c) {
    if (e.size() != amb_) throw Error(Errc::DimensionMismatch, "exponent vector length differs from variable count");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    for (std::size_t i = 0; i < c.size(); ++i) it->second.coords[i] += c.coords[i];
    if (it->second.is_zero()) terms_.erase(it);
  }

  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) {
      return std::all_of(kv.first.begin(), kv.first.end(), [](std::uint32_t x) { return x == 0; });
    });
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (auto x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.amb_ == b.amb_ && a.terms_ == b.terms_; }

 private:
  std::size_t amb_;
  std::map<Exponents, RingElement> terms_;
};

inline void check_same_amb(const MultiPoly& p, const MultiPoly& q) {
  if (p.amb() != q.amb()) throw Error(Errc::DimensionMismatch, "polynomials in different numbers of variables");
}

inline MultiPoly poly_add(const MultiPoly& p, const MultiPoly& q) {
  check_same_amb(p, q);
  MultiPoly r = p;
  for (const auto& [e, c] : q.terms()) r.add_term(e, c);
  return r;
}

inline MultiPoly poly_neg(const NumberRing& ring, const MultiPoly& p) {
  MultiPoly r(p.amb());
  for (const auto& [e, c] : p.terms()) r.add_term(e, ring.neg(c));
  return r;
}

inline MultiPoly poly_sub(const NumberRing& ring, const MultiPoly& p, const MultiPoly& q) {
  return poly_add(p, poly_neg(ring, q));
}

inline MultiPoly poly_mul(const NumberRing& ring, const MultiPoly& p, const MultiPoly& q) {
  check_same_amb(p, q);
  MultiPoly r(p.amb());
  for (const auto& [ep, cp] : p.terms()) {
    for (const auto& [eq, cq] : q.terms()) {
      Exponents e(p.amb());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ep[i] + eq[i];
      r.add_term(e, ring.mul(cp, cq));
    }
  }
  return r;
}

inline MultiPoly poly_pow(const NumberRing& ring, MultiPoly base, std::uint64_t e) {
  MultiPoly r = MultiPoly::constant(base.amb(), ring.one());
  while (e) {
    if (e & 1) r = poly_mul(ring, r, base);
    e >>= 1;
    if (e) base = poly_mul(ring, base, base);
  }
  return r;
}

/// Formal partial derivative with respect to x_{var+1}.
inline MultiPoly poly_derivative(const NumberRing& ring, const MultiPoly& p, std::size_t var) {
  MultiPoly r(p.amb());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, ring.scale(c, Integer(static_cast<unsigned long>(e[var]))));
  }
  return r;
}

/// Printable form accepted back by parse_poly.
inline std::string to_string(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const bool rational = std::all_of(c.coords.begin() + 1, c.coords.end(), [](const Integer& v) { return v == 0; });
    std::string coef;
    bool negative = false;
    if (rational) {
      negative = c.coords[0] < 0;
      Integer a = abs(c.coords[0]);
      if (a != 1 || mono.empty()) coef = a.get_str();
    } else {
      coef = to_string(c);
    }
    std::string term = coef;
    if (!coef.empty() && !mono.empty()) term += "*";
    term += mono;
    if (first)
      out += (negative ? "-" : "") + term;
    else
      out += (negative ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

}  // namespace exunit
