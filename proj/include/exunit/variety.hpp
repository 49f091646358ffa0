#pragma once

/**
 * @file variety.hpp
 * @brief Affine varieties X in A^amb over Z[t] with their Jacobians.
 *
 * Good reduction at P is checked pointwise: every point of X(O_K/P) must
 * have Jacobian rank equal to the declared codimension.
 */

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exunit/enumerate.hpp"
#include "exunit/error.hpp"
#include "exunit/ideal.hpp"
#include "exunit/parser.hpp"
#include "exunit/poly.hpp"
#include "exunit/residue.hpp"

namespace exunit {

struct VarietySpec {
  std::size_t amb = 1;
  std::size_t codim = 0;
  std::vector<MultiPoly> equations;
  unsigned declared_degree = 1;
};

/// declared_degree == 0 means "use the largest total degree of the equations".
inline VarietySpec make_variety(std::size_t amb, std::size_t codim, std::vector<MultiPoly> equations,
                                unsigned declared_degree = 0) {
  if (amb == 0) throw Error(Errc::InvalidVariety, "ambient dimension must be positive");
  if (equations.empty() != (codim == 0))
    throw Error(Errc::InvalidVariety, "codim must be 0 exactly when there are no equations");
  if (codim > amb) throw Error(Errc::InvalidVariety, "codim exceeds ambient dimension");
  unsigned deg = 1;
  for (const auto& e : equations) {
    if (e.amb() != amb) throw Error(Errc::InvalidVariety, "equation in the wrong number of variables");
    if (e.is_zero()) throw Error(Errc::InvalidVariety, "zero equation");
    deg = std::max(deg, e.total_degree());
  }
  return VarietySpec{amb, codim, std::move(equations), declared_degree == 0 ? deg : declared_degree};
}

inline VarietySpec parse_variety(const NumberRing& ring, std::size_t amb, std::size_t codim,
                                 const std::vector<std::string>& equations, unsigned declared_degree = 0) {
  std::vector<MultiPoly> eqs;
  for (const auto& s : equations) eqs.push_back(parse_poly(s, ring, amb));
  return make_variety(amb, codim, std::move(eqs), declared_degree);
}

/// Canonical representative of poly(point) in O_K/n.
inline RingElement eval_poly(const MultiPoly& poly, const std::vector<RingElement>& point, const ResidueCtx& ctx) {
  if (point.size() != poly.amb())
    throw Error(Errc::DimensionMismatch, "point has " + std::to_string(point.size()) + " coordinates, polynomial " +
                                             std::to_string(poly.amb()) + " variables");
  std::vector<RingElement> reduced;
  for (const auto& x : point) reduced.push_back(ctx.reduce(x));
  return detail::eval_at(ctx, detail::CompiledPoly<ResidueCtx>::compile(ctx, poly), reduced);
}

/// rows = equations, columns = variables
using JacobianMatrix = std::vector<std::vector<MultiPoly>>;

inline JacobianMatrix jacobian(const NumberRing& ring, const VarietySpec& V) {
  JacobianMatrix J;
  for (const auto& eq : V.equations) {
    std::vector<MultiPoly> row;
    for (std::size_t j = 0; j < V.amb; ++j) row.push_back(poly_derivative(ring, eq, j));
    J.push_back(std::move(row));
  }
  return J;
}

/// Rank over a residue field; the pivot is the first nonzero entry in
/// row-major order among the rows not yet used.
template <ResidueBackend B>
std::size_t rank_over_field(const B& b, std::vector<std::vector<typename B::elem>> m) {
  std::vector<bool> used(m.size(), false);
  std::size_t rank = 0;
  while (true) {
    std::size_t pi = m.size(), pj = 0;
    for (std::size_t i = 0; i < m.size() && pi == m.size(); ++i) {
      if (used[i]) continue;
      for (std::size_t j = 0; j < m[i].size(); ++j) {
        if (!b.is_zero(m[i][j])) {
          pi = i;
          pj = j;
          break;
        }
      }
    }
    if (pi == m.size()) break;
    const auto inv = b.inverse(m[pi][pj]);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (used[k] || k == pi || b.is_zero(m[k][pj])) continue;
      const auto f = b.mul(m[k][pj], inv);
      for (std::size_t c = 0; c < m[k].size(); ++c) m[k][c] = b.sub(m[k][c], b.mul(f, m[pi][c]));
    }
    used[pi] = true;
    ++rank;
  }
  return rank;
}

inline std::size_t jacobian_rank_at(const JacobianMatrix& J, const std::vector<RingElement>& point,
                                    const ResidueCtx& prime_ctx) {
  if (!prime_ctx.is_prime()) throw Error(Errc::NotPrime, "Jacobian rank needs a residue field");
  std::vector<std::vector<RingElement>> m;
  for (const auto& row : J) {
    std::vector<RingElement> vals;
    for (const auto& entry : row) vals.push_back(eval_poly(entry, point, prime_ctx));
    m.push_back(std::move(vals));
  }
  return rank_over_field(prime_ctx, std::move(m));
}

struct GoodReductionReport {
  bool ok = true;
  std::optional<std::vector<RingElement>> witness;
};

/// Raised when a computation needs good reduction at a prime that fails it.
class BadReductionError : public Error {
 public:
  BadReductionError(PrimeFactor prime, std::vector<RingElement> witness)
      : Error(Errc::BadReduction, "bad reduction at " + prime.label() + ", singular point " + describe(witness)),
        prime_(std::move(prime)),
        witness_(std::move(witness)) {}

  const PrimeFactor& prime() const { return prime_; }
  const std::vector<RingElement>& witness() const { return witness_; }

 private:
  static std::string describe(const std::vector<RingElement>& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + to_string(w[i]);
    return s + ")";
  }
  PrimeFactor prime_;
  std::vector<RingElement> witness_;
};

namespace detail {

template <ResidueBackend B>
struct CompiledVariety {
  std::vector<CompiledPoly<B>> equations;
  std::vector<std::vector<CompiledPoly<B>>> jacobian;
  std::vector<std::uint32_t> max_power;

  CompiledVariety(const B& b, const NumberRing& ring, const VarietySpec& V) {
    for (const auto& e : V.equations) equations.push_back(CompiledPoly<B>::compile(b, e));
    std::vector<CompiledPoly<B>> all = equations;
    for (const auto& row : exunit::jacobian(ring, V)) {
      std::vector<CompiledPoly<B>> crow;
      for (const auto& entry : row) {
        crow.push_back(CompiledPoly<B>::compile(b, entry));
        all.push_back(crow.back());
      }
      jacobian.push_back(std::move(crow));
    }
    max_power = merged_max_power(V.amb, all);
  }

  std::size_t rank_at(const B& b, const TupleWalker<B>& w) const {
    auto pw = [&](std::uint32_t j, std::uint32_t k) -> const typename B::elem& { return w.power(j, k); };
    std::vector<std::vector<typename B::elem>> m;
    for (const auto& row : jacobian) {
      std::vector<typename B::elem> vals;
      for (const auto& entry : row) vals.push_back(entry.eval(b, pw));
      m.push_back(std::move(vals));
    }
    return rank_over_field(b, std::move(m));
  }
};

}  // namespace detail

/**
 * Enumerates (O_K/P)^amb, and for every point of X checks that the Jacobian
 * has rank codim there. The witness is the first failing point in
 * enumeration order. Vacuously fine for X = A^amb and for empty fibres.
 */
inline GoodReductionReport check_good_reduction(const NumberRing& ring, const VarietySpec& V, const PrimeFactor& prime,
                                                const EnumOptions& opt = {}) {
  if (V.equations.empty()) return {};
  const ResidueCtx ctx = ResidueCtx::prime(ring, prime);
  const std::uint64_t total = tuple_count(ctx.norm(), V.amb, opt.cap, Errc::EnumerationCapExceeded);
  return with_backend(ctx, opt.backend, [&](const auto& b) {
    using B = std::decay_t<decltype(b)>;
    const detail::CompiledVariety<B> cv(b, ring, V);
    struct Part {
      bool bad = false;
      std::vector<RingElement> witness;
    };
    auto parts = detail::partitioned(total, opt.workers, [&](std::uint64_t begin, std::uint64_t end) {
      Part part;
      detail::TupleWalker<B> w(b, V.amb, cv.max_power, begin);
      for (std::uint64_t i = begin; i < end; ++i, w.next()) {
        if (!detail::all_vanish(b, cv.equations, w)) continue;
        if (cv.rank_at(b, w) != V.codim) {
          part.bad = true;
          for (const auto& x : w.point()) part.witness.push_back(b.to_element(x));
          break;
        }
      }
      return part;
    });
    GoodReductionReport rep;
    for (auto& p : parts) {
      if (!p.bad) continue;
      rep.ok = false;
      rep.witness = std::move(p.witness);
      break;
    }
    return rep;
  });
}

inline void require_good_reduction(const NumberRing& ring, const VarietySpec& V, const PrimeFactor& prime,
                                   const EnumOptions& opt) {
  auto rep = check_good_reduction(ring, V, prime, opt);
  if (!rep.ok) throw BadReductionError(prime, *rep.witness);
}

}  // namespace exunit
