#pragma once

/**
 * @file enumerate.hpp
 * @brief Backend-generic walking of (O_K/n)^amb, with a deterministic
 * range-partitioned parallel reduction on top.
 *
 * Tuples are ordered by linear index sum_j idx(x_j) * N^(j-1), so x1 varies
 * fastest (the same convention as residue enumeration, where c0 varies
 * fastest).
 */

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "exunit/error.hpp"
#include "exunit/poly.hpp"
#include "exunit/residue.hpp"

namespace exunit {

enum class BackendChoice { Auto, Exact, Fast };

struct EnumOptions {
  /// Maximum number of candidate tuples any single enumeration may visit.
  std::uint64_t cap = 100'000'000;
  unsigned workers = 1;
  BackendChoice backend = BackendChoice::Auto;
};

/// Runs fn(backend) with FastResidue when allowed and possible, otherwise with the exact context.
template <class F>
decltype(auto) with_backend(const ResidueCtx& ctx, BackendChoice choice, F&& fn) {
  if (choice == BackendChoice::Exact || (choice == BackendChoice::Auto && !FastResidue::fits(ctx))) return fn(ctx);
  FastResidue fast(ctx);
  return fn(fast);
}

/// N^amb as an exact integer, with the cap check used by every enumeration.
inline std::uint64_t tuple_count(const Integer& norm, std::size_t amb, std::uint64_t cap, Errc code) {
  Integer total = ipow(norm, amb);
  if (total > Integer(static_cast<unsigned long>(cap)))
    throw Error(code, norm.get_str() + "^" + std::to_string(amb) + " = " + total.get_str() +
                          " candidate tuples exceed the cap of " + std::to_string(cap));
  return total.get_ui();
}

namespace detail {

template <ResidueBackend B>
struct CompiledPoly {
  using elem = typename B::elem;
  struct Term {
    elem coef;
    bool coef_is_one = false;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> vars;  // (variable, exponent)
  };
  std::vector<Term> terms;
  std::vector<std::uint32_t> max_power;

  static CompiledPoly compile(const B& b, const MultiPoly& p) {
    CompiledPoly out;
    out.max_power.assign(p.amb(), 0);
    for (const auto& [e, c] : p.terms()) {
      Term t;
      t.coef = b.from(c);
      if (b.is_zero(t.coef)) continue;
      t.coef_is_one = t.coef == b.one();
      for (std::uint32_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        t.vars.emplace_back(j, e[j]);
        out.max_power[j] = std::max(out.max_power[j], e[j]);
      }
      out.terms.push_back(std::move(t));
    }
    return out;
  }

  bool is_zero() const { return terms.empty(); }

  /// pw(j, k) must return x_j^k for k <= max_power[j].
  template <class Powers>
  elem eval(const B& b, const Powers& pw) const {
    elem acc = b.zero();
    for (const auto& t : terms) {
      elem v;
      bool have = false;
      if (!t.coef_is_one) {
        v = t.coef;
        have = true;
      }
      for (const auto& [j, k] : t.vars) {
        if (!have) {
          v = pw(j, k);
          have = true;
        } else {
          v = b.mul(v, pw(j, k));
        }
      }
      acc = b.add(acc, have ? v : b.one());
    }
    return acc;
  }
};

template <ResidueBackend B>
inline std::vector<typename B::elem> powers_of(const B& b, const typename B::elem& x, std::uint32_t k) {
  std::vector<typename B::elem> pw{b.one(), x};
  for (std::uint32_t i = 2; i <= k; ++i) pw.push_back(b.mul(pw.back(), x));
  return pw;
}

/// Evaluates at an explicit point.
template <ResidueBackend B>
typename B::elem eval_at(const B& b, const CompiledPoly<B>& p, const std::vector<typename B::elem>& point) {
  std::vector<std::vector<typename B::elem>> pw;
  for (std::size_t j = 0; j < point.size(); ++j)
    pw.push_back(powers_of(b, point[j], j < p.max_power.size() ? p.max_power[j] : 1));
  return p.eval(b, [&](std::uint32_t j, std::uint32_t k) -> const typename B::elem& { return pw[j][k]; });
}

/// Odometer over (O_K/n)^amb keeping x_j^k cached; x1 is the fastest digit.
template <ResidueBackend B>
class TupleWalker {
 public:
  using elem = typename B::elem;

  TupleWalker(const B& b, std::size_t amb, std::vector<std::uint32_t> max_power, std::uint64_t start)
      : b_(b), radix_(b.size()), idx_(amb, 0), max_power_(std::move(max_power)), pows_(amb) {
    max_power_.resize(amb, 1);
    for (auto& m : max_power_) m = std::max<std::uint32_t>(m, 1);
    for (std::size_t j = 0; j < amb; ++j) {
      idx_[j] = start % radix_;
      start /= radix_;
      load(j);
    }
  }

  void next() {
    for (std::size_t j = 0; j < idx_.size(); ++j) {
      if (++idx_[j] < radix_) {
        load(j);
        return;
      }
      idx_[j] = 0;
      load(j);
    }
  }

  const elem& value(std::size_t j) const { return pows_[j][1]; }
  const elem& power(std::size_t j, std::uint32_t k) const { return pows_[j][k]; }
  std::uint64_t index(std::size_t j) const { return idx_[j]; }
  std::vector<elem> point() const {
    std::vector<elem> out;
    for (std::size_t j = 0; j < idx_.size(); ++j) out.push_back(value(j));
    return out;
  }

 private:
  void load(std::size_t j) {
    auto& p = pows_[j];
    p.resize(max_power_[j] + 1);
    p[0] = b_.one();
    p[1] = b_.at(idx_[j]);
    for (std::uint32_t k = 2; k <= max_power_[j]; ++k) p[k] = b_.mul(p[k - 1], p[1]);
  }

  const B& b_;
  std::uint64_t radix_;
  std::vector<std::uint64_t> idx_;
  std::vector<std::uint32_t> max_power_;
  std::vector<std::vector<elem>> pows_;
};

template <ResidueBackend B>
std::vector<std::uint32_t> merged_max_power(std::size_t amb, const std::vector<CompiledPoly<B>>& polys) {
  std::vector<std::uint32_t> m(amb, 1);
  for (const auto& p : polys)
    for (std::size_t j = 0; j < amb && j < p.max_power.size(); ++j) m[j] = std::max(m[j], p.max_power[j]);
  return m;
}

/**
 * Splits [0, total) into `workers` contiguous ranges, evaluates
 * fn(begin, end) on each (concurrently when workers > 1), and returns the
 * partial results in range order.
 */
template <class Fn>
auto partitioned(std::uint64_t total, unsigned workers, Fn&& fn) {
  using R = decltype(fn(std::uint64_t{0}, std::uint64_t{0}));
  workers = std::max(1u, workers);
  if (total < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, total));
  std::vector<R> parts(workers);
  if (workers == 1) {
    parts[0] = fn(0, total);
    return parts;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = total / workers * w + std::min<std::uint64_t>(w, total % workers);
    const std::uint64_t end = begin + total / workers + (w < total % workers ? 1 : 0);
    threads.emplace_back([&, w, begin, end] {
      try {
        parts[w] = fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return parts;
}

template <ResidueBackend B>
bool all_vanish(const B& b, const std::vector<CompiledPoly<B>>& eqs, const TupleWalker<B>& w) {
  auto pw = [&](std::uint32_t j, std::uint32_t k) -> const typename B::elem& { return w.power(j, k); };
  for (const auto& e : eqs)
    if (!b.is_zero(e.eval(b, pw))) return false;
  return true;
}

}  // namespace detail

}  // namespace exunit
