#pragma once

/**
 * @file cli.hpp
 * @brief Job configuration and the four report commands behind the exunit
 * executable. Each command returns its exit code together with the text
 * destined for stdout and stderr, so callers other than main() can drive it.
 *
 * Exit codes: 0 success, 1 input error, 2 a hypothesis of the formula fails
 * (bad reduction), or a verification check fails.
 */

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "exunit/counting.hpp"
#include "exunit/error.hpp"
#include "exunit/ideal.hpp"
#include "exunit/number_ring.hpp"
#include "exunit/parser.hpp"
#include "exunit/variety.hpp"

namespace exunit::cli {

using json = nlohmann::ordered_json;

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

struct Modulus {
  IdealHNF ideal;
  /// Set when the modulus was given in primes form.
  std::optional<std::vector<PrimeFactor>> factors;

  std::vector<PrimeFactor> factorization(const NumberRing& ring) const {
    return factors ? *factors : factor_ideal(ring, ideal);
  }
};

struct JobConfig {
  explicit JobConfig(NumberRing r) : ring(std::move(r)) {}

  NumberRing ring;
  VarietySpec variety;
  MultiPoly f{1};
  std::optional<Modulus> modulus;
  EnumOptions enum_opts;
  std::string method = "formula";
  std::string mode = "corrected";
  std::optional<unsigned long> max_norm;
  unsigned products = 0;
};

namespace detail {

[[noreturn]] inline void bad(const std::string& msg) { throw Error(Errc::InvalidConfig, msg); }

inline Integer to_int(const json& j, const std::string& what) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()), 10)
                                                           : Integer(std::to_string(j.get<std::int64_t>()), 10);
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() > start && std::all_of(s.begin() + start, s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return Integer(s, 10);
  }
  bad(what + " must be an integer or a decimal string");
}

inline std::uint64_t to_u64(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  bad(what + " must be a non-negative integer");
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where + " is missing '" + key + "'");
  return obj.at(key);
}

inline std::string str(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

inline std::string strip_code(const Error& e) {
  std::string s = e.what();
  const auto pos = s.find(": ");
  return pos == std::string::npos ? s : s.substr(pos + 2);
}

inline std::string strip_offset(const ParseError& e) {
  std::string s = strip_code(e);
  const std::string tail = " at offset " + std::to_string(e.offset());
  if (s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0)
    s.erase(s.size() - tail.size());
  return s;
}

/// Prefixes errors with the config location they came from.
template <class Fn>
auto located(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(e.code(), e.offset(), where + ": " + strip_offset(e));
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + strip_code(e));
  }
}

inline RingElement to_element(const NumberRing& ring, const json& j, const std::string& what) {
  if (!j.is_array()) return ring.from_integer(to_int(j, what));
  if (j.size() != ring.degree())
    throw Error(Errc::DimensionMismatch, what + " has " + std::to_string(j.size()) + " coordinates, ring degree is " +
                                             std::to_string(ring.degree()));
  RingElement r;
  for (const auto& c : j) r.coords.push_back(to_int(c, what));
  return r;
}

inline json small_or_string(const Integer& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

inline json element_json(const RingElement& a) {
  json arr = json::array();
  for (const auto& c : a.coords) arr.push_back(small_or_string(c));
  return arr;
}

inline json prime_json(const PrimeFactor& P) {
  json h = json::array();
  for (const auto& c : P.h) h.push_back(small_or_string(c));
  return json{{"label", P.label()}, {"p", P.p.get_str()}, {"h", h}};
}

inline json local_json(const LocalData& ld) {
  json h = json::array();
  for (const auto& c : ld.prime.h) h.push_back(small_or_string(c));
  return json{{"p", ld.prime.p.get_str()},
              {"h", h},
              {"f_res", ld.prime.f_res},
              {"e_ram", ld.prime.e_ram},
              {"exponent", ld.prime.exponent},
              {"norm", ld.prime.norm().get_str()},
              {"count_X", ld.count_X.get_str()},
              {"count_N", ld.count_N.get_str()},
              {"factor", {{"num", ld.factor.get_num().get_str()}, {"den", ld.factor.get_den().get_str()}}}};
}

inline CommandResult bad_reduction_result(const BadReductionError& e) {
  json w = json::array();
  for (const auto& x : e.witness()) w.push_back(element_json(x));
  json out{{"error", "BadReduction"}, {"prime", prime_json(e.prime())}, {"witness", w}};
  return {2, out.dump(2) + "\n", std::string("error: ") + e.what() + "\n"};
}

/// Runs a command body, mapping library errors onto exit codes.
template <class Fn>
CommandResult guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const BadReductionError& e) {
    return bad_reduction_result(e);
  } catch (const Error& e) {
    return {1, "", std::string("error: ") + e.what() + "\n"};
  } catch (const json::exception& e) {
    return {1, "", std::string("error: InvalidConfig: ") + e.what() + "\n"};
  }
}

}  // namespace detail

inline Modulus parse_modulus(const NumberRing& ring, const json& j) {
  using namespace detail;
  if (!j.is_object()) bad("modulus must be an object with 'generators' or 'primes'");
  if (j.contains("generators") == j.contains("primes")) bad("modulus needs exactly one of 'generators' and 'primes'");
  if (j.contains("generators")) {
    const json& gens = j.at("generators");
    if (!gens.is_array() || gens.empty()) bad("modulus.generators must be a non-empty array");
    std::vector<RingElement> elems;
    for (std::size_t i = 0; i < gens.size(); ++i)
      elems.push_back(to_element(ring, gens[i], "modulus.generators[" + std::to_string(i) + "]"));
    IdealHNF I = hnf_from_generators(ring, elems);
    if (I.norm() == 1) throw Error(Errc::UnitIdeal, "modulus is the unit ideal");
    return Modulus{I, std::nullopt};
  }
  const json& primes = j.at("primes");
  if (!primes.is_array() || primes.empty()) bad("modulus.primes must be a non-empty array");
  std::vector<PrimeFactor> factors;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::string where = "modulus.primes[" + std::to_string(i) + "]";
    const json& e = primes[i];
    const Integer p = to_int(field(e, "p", where), where + ".p");
    const json& hj = field(e, "h", where);
    if (!hj.is_array()) bad(where + ".h must be an array of coefficients, constant term first");
    std::vector<Integer> h;
    for (const auto& c : hj) h.push_back(to_int(c, where + ".h"));
    const unsigned long exponent = e.contains("exponent") ? to_u64(e.at("exponent"), where + ".exponent") : 1;
    if (exponent == 0) bad(where + ".exponent must be positive");
    PrimeFactor P = located(where, [&] { return make_prime_factor(ring, p, h, static_cast<unsigned>(exponent)); });
    for (const auto& Q : factors)
      if (Q.hnf == P.hnf) bad(where + " repeats the prime " + P.label());
    factors.push_back(std::move(P));
  }
  return Modulus{ideal_from_factors(ring, factors), factors};
}

inline JobConfig parse_config(const json& cfg) {
  using namespace detail;
  if (!cfg.is_object()) bad("config must be a JSON object");

  const json& fld = field(cfg, "field", "config");
  const json& mp = field(fld, "min_poly", "field");
  if (!mp.is_array()) bad("field.min_poly must be an array of coefficients, constant term first");
  std::vector<Integer> g;
  for (const auto& c : mp) g.push_back(to_int(c, "field.min_poly"));
  JobConfig jc(located("field.min_poly", [&] { return make_number_ring(g); }));

  const json& var = field(cfg, "variety", "config");
  const std::uint64_t amb = to_u64(field(var, "amb", "variety"), "variety.amb");
  const std::uint64_t codim = var.contains("codim") ? to_u64(var.at("codim"), "variety.codim") : 0;
  const std::uint64_t degree = var.contains("degree") ? to_u64(var.at("degree"), "variety.degree") : 0;
  std::vector<MultiPoly> eqs;
  if (var.contains("equations")) {
    const json& ej = var.at("equations");
    if (!ej.is_array()) bad("variety.equations must be an array of strings");
    for (std::size_t i = 0; i < ej.size(); ++i) {
      const std::string where = "variety.equations[" + std::to_string(i) + "]";
      const std::string src = str(ej[i], where);
      eqs.push_back(located(where, [&] { return parse_poly(src, jc.ring, amb); }));
    }
  }
  jc.variety = make_variety(amb, codim, std::move(eqs), static_cast<unsigned>(degree));

  if (cfg.contains("f")) {
    const std::string src = str(cfg.at("f"), "f");
    jc.f = located("f", [&] { return parse_poly(src, jc.ring, 1); });
    located("f", [&] {
      require_nonconstant(jc.f);
      return 0;
    });
  } else {
    bad("config is missing 'f'");
  }

  if (cfg.contains("modulus")) jc.modulus = parse_modulus(jc.ring, cfg.at("modulus"));

  if (cfg.contains("options")) {
    const json& o = cfg.at("options");
    if (!o.is_object()) bad("options must be an object");
    if (o.contains("method")) jc.method = str(o.at("method"), "options.method");
    if (o.contains("mode")) jc.mode = str(o.at("mode"), "options.mode");
    if (o.contains("cap")) jc.enum_opts.cap = to_u64(o.at("cap"), "options.cap");
    if (o.contains("workers")) jc.enum_opts.workers = static_cast<unsigned>(to_u64(o.at("workers"), "options.workers"));
    if (o.contains("max_norm")) jc.max_norm = to_u64(o.at("max_norm"), "options.max_norm");
    if (o.contains("products")) jc.products = static_cast<unsigned>(to_u64(o.at("products"), "options.products"));
    if (o.contains("backend")) {
      const std::string b = str(o.at("backend"), "options.backend");
      if (b == "auto")
        jc.enum_opts.backend = BackendChoice::Auto;
      else if (b == "exact")
        jc.enum_opts.backend = BackendChoice::Exact;
      else if (b == "fast")
        jc.enum_opts.backend = BackendChoice::Fast;
      else
        bad("options.backend must be auto, exact or fast");
    }
  }
  return jc;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, what + " is not valid JSON (" + e.what() + ")");
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

/// Command-line values that take precedence over the config's options block.
struct Overrides {
  std::optional<std::string> method = std::nullopt;
  std::optional<unsigned> workers = std::nullopt;
  std::optional<std::uint64_t> cap = std::nullopt;
  std::optional<unsigned long> max_norm = std::nullopt;
  std::optional<unsigned> products = std::nullopt;
};

inline void apply(JobConfig& jc, const Overrides& ov) {
  if (ov.method) jc.method = *ov.method;
  if (ov.workers) jc.enum_opts.workers = *ov.workers;
  if (ov.cap) jc.enum_opts.cap = *ov.cap;
  if (ov.max_norm) jc.max_norm = *ov.max_norm;
  if (ov.products) jc.products = *ov.products;
}

inline const Modulus& require_modulus(const JobConfig& jc) {
  if (!jc.modulus) throw Error(Errc::InvalidConfig, "config is missing 'modulus'");
  return *jc.modulus;
}

inline CommandResult run_count(const json& config, const Overrides& ov = {}) {
  return detail::guarded([&] {
    JobConfig jc = parse_config(config);
    apply(jc, ov);
    const Modulus& mod = require_modulus(jc);
    CountReport rep;
    if (jc.method == "formula" || jc.method == "both") {
      rep = theorem1_count(jc.ring, jc.variety, jc.f, mod.factorization(jc.ring), jc.enum_opts);
      rep.method = CountMethod::Formula;
    } else if (jc.method != "brute") {
      throw Error(Errc::InvalidConfig, "method must be formula, brute or both");
    }
    if (jc.method == "brute" || jc.method == "both") {
      const Integer brute = brute_force_count(jc.ring, jc.variety, jc.f, mod.ideal, jc.enum_opts);
      if (jc.method == "brute") {
        rep.modulus_norm = mod.ideal.norm();
        rep.exponent = jc.variety.amb - jc.variety.codim;
        rep.total = brute;
        rep.method = CountMethod::Brute;
      } else {
        rep.agreement = brute == rep.total;
        rep.method = CountMethod::Both;
      }
    }
    json locals = json::array();
    for (const auto& ld : rep.locals) locals.push_back(detail::local_json(ld));
    json out{{"modulus_norm", rep.modulus_norm.get_str()},
             {"exponent", rep.exponent},
             {"locals", locals},
             {"total", rep.total.get_str()},
             {"method", std::string(method_name(rep.method))}};
    if (rep.agreement) out["agreement"] = *rep.agreement;
    return CommandResult{0, out.dump(2) + "\n", ""};
  });
}

inline CommandResult run_verify(const json& config, const Overrides& ov = {}) {
  return detail::guarded([&] {
    JobConfig jc = parse_config(config);
    apply(jc, ov);
    const Modulus& mod = require_modulus(jc);
    const auto factors = mod.factorization(jc.ring);
    const auto& V = jc.variety;
    const auto& opt = jc.enum_opts;
    json checks = json::array();
    bool all_pass = true;
    bool all_good = true;
    auto skipped = [&](json c, const Error& e) {
      c["status"] = "skipped";
      c["reason"] = e.what();
      checks.push_back(std::move(c));
    };
    auto record = [&](json c, bool pass) {
      c["status"] = pass ? "pass" : "fail";
      all_pass = all_pass && pass;
      checks.push_back(std::move(c));
    };

    for (const auto& P : factors) {
      json c{{"name", "good_reduction"}, {"prime", P.label()}};
      try {
        const auto rep = check_good_reduction(jc.ring, V, P, opt);
        if (!rep.ok) {
          json w = json::array();
          for (const auto& x : *rep.witness) w.push_back(detail::element_json(x));
          c["witness"] = w;
        }
        all_good = all_good && rep.ok;
        record(c, rep.ok);
        if (!rep.ok) continue;
      } catch (const Error& e) {
        all_good = false;
        skipped(c, e);
        continue;
      }
      const Integer expected = ipow(P.norm(), V.amb - V.codim);
      for (unsigned k = 1; k <= std::max(1u, P.exponent); ++k) {
        json cc{{"name", "lifting_census"}, {"prime", P.label()}, {"k", k}, {"expected_bin", expected.get_str()}};
        try {
          const Histogram h = lifting_census(jc.ring, V, P, k, opt);
          json hist = json::object();
          for (const auto& [lifts, freq] : h) hist[std::to_string(lifts)] = freq;
          cc["histogram"] = hist;
          const bool single = h.empty() || (h.size() == 1 && Integer(static_cast<unsigned long>(h.begin()->first)) == expected);
          record(cc, single);
        } catch (const Error& e) {
          skipped(cc, e);
        }
      }
    }

    if (factors.size() >= 2) {
      std::vector<PrimeFactor> first{factors.front()};
      std::vector<PrimeFactor> rest(factors.begin() + 1, factors.end());
      json c{{"name", "multiplicativity"}, {"m", describe_factors(first)}, {"n", describe_factors(rest)}};
      try {
        const Integer cm = brute_force_count(jc.ring, V, jc.f, ideal_from_factors(jc.ring, first), opt);
        const Integer cn = brute_force_count(jc.ring, V, jc.f, ideal_from_factors(jc.ring, rest), opt);
        const Integer cmn = brute_force_count(jc.ring, V, jc.f, mod.ideal, opt);
        c["count_m"] = cm.get_str();
        c["count_n"] = cn.get_str();
        c["count_mn"] = cmn.get_str();
        record(c, cm * cn == cmn);
      } catch (const Error& e) {
        skipped(c, e);
      }
    }

    json c{{"name", "formula_vs_brute"}};
    if (!all_good) {
      c["status"] = "skipped";
      c["reason"] = "good reduction does not hold at every prime";
      checks.push_back(c);
    } else {
      try {
        const CountReport rep = theorem1_count(jc.ring, V, jc.f, factors, opt);
        c["formula"] = rep.total.get_str();
        const Integer brute = brute_force_count(jc.ring, V, jc.f, mod.ideal, opt);
        c["brute"] = brute.get_str();
        record(c, brute == rep.total);
      } catch (const Error& e) {
        skipped(c, e);
      }
    }

    json out{{"modulus", describe_factors(factors)},
             {"modulus_norm", mod.ideal.norm().get_str()},
             {"checks", checks},
             {"all_pass", all_pass}};
    return CommandResult{all_pass ? 0 : 2, out.dump(2) + "\n", ""};
  });
}

inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline constexpr unsigned long kMaxAsymptNorm = 10'000;

inline CommandResult run_asympt(const json& config, const Overrides& ov = {}) {
  return detail::guarded([&] {
    JobConfig jc = parse_config(config);
    apply(jc, ov);
    if (!jc.max_norm) throw Error(Errc::InvalidConfig, "asympt needs a norm bound (--max-norm)");
    if (*jc.max_norm > kMaxAsymptNorm)
      throw Error(Errc::InvalidConfig, "norm bound " + std::to_string(*jc.max_norm) + " exceeds 10000");
    const Family fam = asympt_family(jc.ring, jc.variety, *jc.max_norm, jc.products, jc.enum_opts);
    AsymptSeries series = asympt_series(jc.ring, jc.variety, jc.f, fam.members, jc.enum_opts);
    std::sort(series.records.begin(), series.records.end(), [](const AsymptRecord& a, const AsymptRecord& b) {
      if (a.N != b.N) return a.N < b.N;
      return a.modulus < b.modulus;
    });
    std::string csv = "modulus,N,count,ratio,omega,sum_inv_sqrt,sum_inv,max_local_dev\n";
    for (const auto& r : series.records) {
      csv += r.modulus + "," + r.N.get_str() + "," + r.count.get_str() + "," + format_g12(r.ratio.get_d()) + "," +
             std::to_string(r.omega) + "," + format_g12(r.sum_inv_sqrt) + "," + format_g12(r.sum_inv) + "," +
             format_g12(r.max_local_dev) + "\n";
    }
    std::string err;
    for (const auto& n : fam.notices) err += "notice: " + n + "\n";
    for (const auto& n : series.notices) err += "notice: " + n + "\n";
    return CommandResult{0, csv, err};
  });
}

struct Example25Args {
  Integer a;
  Integer c;
  std::string modulus_json;
  std::string mode = "corrected";
  EnumOptions enum_opts;
};

inline CommandResult run_example25(const Example25Args& args) {
  return detail::guarded([&] {
    Example25Mode mode;
    if (args.mode == "corrected")
      mode = Example25Mode::Corrected;
    else if (args.mode == "strict-paper" || args.mode == "strict_paper")
      mode = Example25Mode::StrictPaper;
    else
      throw Error(Errc::InvalidConfig, "mode must be corrected or strict-paper");
    const NumberRing ring = make_number_ring({5, 0, 1});
    const Modulus mod = parse_modulus(ring, parse_json_text(args.modulus_json, "--modulus"));
    const CountReport ex = example25_count(ring, args.a, args.c, mod.ideal, mode);

    MultiPoly circle = parse_poly("x1^2+x2^2", ring, 2);
    circle.add_term({0, 0}, ring.from_integer(-args.c));
    const VarietySpec V = make_variety(2, 1, {circle});
    MultiPoly f = MultiPoly::variable(ring, 1, 0);
    f.add_term({0}, ring.from_integer(-args.a));

    const CountReport t1 = theorem1_count(ring, V, f, mod.factorization(ring), args.enum_opts);
    json out{{"mode", mode == Example25Mode::Corrected ? "corrected" : "strict-paper"},
             {"example_total", ex.total.get_str()},
             {"theorem1_total", t1.total.get_str()}};
    bool agree = ex.total == t1.total;
    if (ipow(mod.ideal.norm(), 2) <= Integer(static_cast<unsigned long>(args.enum_opts.cap))) {
      const Integer brute = brute_force_count(ring, V, f, mod.ideal, args.enum_opts);
      out["brute_total"] = brute.get_str();
      agree = agree && brute == t1.total;
    }
    out["agree"] = agree;
    return CommandResult{0, out.dump(2) + "\n", ""};
  });
}

}  // namespace exunit::cli
