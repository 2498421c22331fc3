// advest: solve beta u' = f on an interval, reconstruct a conforming
// potential, and report the guaranteed L2 error bound.
//
// Exit codes: 0 success, 2 guaranteed bound violated while hat
// orthogonality held, 1 any other error. CLI11 reports usage errors with
// its own codes.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "advest/driver.hpp"
#include "advest/errors.hpp"

namespace {

int emit(const advest::RunResult& result, const std::string& out_path) {
  std::cout << result.csv;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 1;
    }
    out << result.csv;
  }
  return result.bound_violation ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Guaranteed a posteriori error bounds for 1D linear advection"};
  app.require_subcommand(1);

  std::string preset_name;
  std::string preset_out;
  auto* preset = app.add_subcommand("preset", "Run a built-in study");
  preset->add_option("name", preset_name, "table1 | table2 | table3 | table4")
      ->required();
  preset->add_option("--out", preset_out, "Also write the output to FILE");

  std::string method_str;
  int k_flag = 0;
  int kprime_flag = 0;
  std::vector<int> elements_flag;
  std::vector<double> betas_flag;
  std::vector<double> domain_flag;
  std::string source_flag;
  double grading_flag = 1.0;
  std::string run_preset_flag;
  std::string config_path;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Solve and estimate one configuration");
  run->add_option("--method", method_str, "pg1 | pg2 | dg");
  run->add_option("--k", k_flag, "Trial polynomial degree");
  run->add_option("--kprime", kprime_flag, "Reconstruction degree");
  run->add_option("--elements", elements_flag, "Element counts, e.g. 4,16,64")
      ->delimiter(',');
  run->add_option("--beta", betas_flag, "Velocities, e.g. 1 or 1e-4,1,1e4")
      ->delimiter(',');
  run->add_option("--source", source_flag, "arctan | table81 | poly:c0,c1,...");
  run->add_option("--grading", grading_flag,
                  "Adjacent element width ratio (1 = uniform)");
  run->add_option("--domain", domain_flag, "Interval endpoints a,b")
      ->delimiter(',')
      ->expected(2);
  run->add_option("--config", config_path, "key=value file; flags override it");
  run->add_option("--preset", run_preset_flag, "Delegate to a built-in study");
  run->add_option("--out", run_out, "Also write the output to FILE");

  std::uint64_t seed = 1;
  int cases = 200;
  auto* check =
      app.add_subcommand("check", "Randomized guaranteed-bound sweep");
  check->add_option("--seed", seed, "RNG seed");
  check->add_option("--cases", cases, "Number of random configurations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset->parsed()) {
      return emit(advest::run_preset(preset_name), preset_out);
    }
    if (run->parsed()) {
      advest::RunConfig cfg;
      if (!config_path.empty()) cfg = advest::parse_config_file(config_path);
      if (run->count("--method")) cfg.method = advest::parse_method(method_str);
      if (run->count("--k")) cfg.k = k_flag;
      if (run->count("--kprime")) cfg.kprime = kprime_flag;
      if (run->count("--elements")) cfg.elements = elements_flag;
      if (run->count("--beta")) cfg.betas = betas_flag;
      if (run->count("--source")) cfg.source_spec = source_flag;
      if (run->count("--grading")) cfg.grading = grading_flag;
      if (run->count("--domain")) {
        cfg.domain_a = domain_flag[0];
        cfg.domain_b = domain_flag[1];
      }
      if (run->count("--preset")) cfg.preset = run_preset_flag;
      if (run->count("--out")) cfg.out = run_out;
      return emit(advest::run_custom(cfg), cfg.out);
    }
    // check
    const auto result = advest::run_check(seed, cases);
    std::cout << result.log;
    return result.ok() ? 0 : 2;
  } catch (const advest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
