#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "exunit/cli.hpp"

namespace {

int emit(const exunit::cli::CommandResult& r, const std::string& out_path = "") {
  if (!r.err.empty()) std::cerr << r.err;
  if (out_path.empty() || r.exit_code != 0) {
    std::cout << r.out;
    return r.exit_code;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: InvalidConfig: cannot write " << out_path << "\n";
    return 1;
  }
  f << r.out;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace exunit::cli;
  CLI::App app{"Count f-exunit points on affine varieties over monogenic number rings"};
  app.require_subcommand(1);

  std::optional<unsigned> workers;
  std::optional<std::uint64_t> cap;
  app.add_option("--workers", workers, "Worker threads for enumeration")->check(CLI::Range(1u, 256u));
  app.add_option("--cap", cap, "Maximum number of tuples any single enumeration may visit");

  std::string config;
  std::optional<std::string> method;
  auto* count = app.add_subcommand("count", "Count points modulo the configured ideal");
  count->add_option("--config", config, "Job configuration (JSON)")->required();
  count->add_option("--method", method, "formula, brute or both")
      ->check(CLI::IsMember({"formula", "brute", "both"}));

  auto* verify = app.add_subcommand("verify", "Check the hypotheses and identities behind the product formula");
  verify->add_option("--config", config, "Job configuration (JSON)")->required();

  std::optional<unsigned long> max_norm;
  std::optional<unsigned> products;
  std::string out_path;
  auto* asympt = app.add_subcommand("asympt", "Tabulate counts over a family of moduli as CSV");
  asympt->add_option("--config", config, "Job configuration (JSON)")->required();
  asympt->add_option("--max-norm", max_norm, "Largest modulus norm in the family");
  asympt->add_option("--products", products, "0 primes, 1 adds prime powers, 2 adds products of two primes")
      ->check(CLI::Range(0u, 2u));
  asympt->add_option("--out", out_path, "Write the CSV here instead of stdout");

  std::string a = "0", c = "1", modulus, mode = "corrected";
  auto* ex25 = app.add_subcommand("example25", "Circle over Z[sqrt(-5)]: closed form against direct counts");
  ex25->add_option("--a", a, "f = x - a")->required();
  ex25->add_option("--c", c, "x^2 + y^2 = c")->required();
  ex25->add_option("--modulus", modulus, "Modulus as JSON, generators or primes form")->required();
  ex25->add_option("--mode", mode, "corrected or strict-paper")
      ->check(CLI::IsMember({"corrected", "strict-paper", "strict_paper"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const Overrides ov{method, workers, cap, max_norm, products};
  try {
    if (*count) return emit(run_count(load_json_file(config), ov));
    if (*verify) return emit(run_verify(load_json_file(config), ov));
    if (*asympt) return emit(run_asympt(load_json_file(config), ov), out_path);
    if (*ex25) {
      Example25Args args;
      args.a = detail::to_int(json(a), "--a");
      args.c = detail::to_int(json(c), "--c");
      args.modulus_json = modulus;
      args.mode = mode;
      if (workers) args.enum_opts.workers = *workers;
      if (cap) args.enum_opts.cap = *cap;
      return emit(run_example25(args));
    }
  } catch (const exunit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
