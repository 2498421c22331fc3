#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advest/solvers.hpp"

namespace advest {

// One study: solve + estimate over a list of meshes and velocities.
struct RunConfig {
  Method method = Method::pg2;
  int k = 1;
  int kprime = 1;
  std::vector<int> elements = {4, 16, 64};
  std::vector<double> betas = {1.0};
  std::string source_spec = "arctan";
  double grading = 1.0; // adjacent width ratio; 1 = uniform
  std::string preset = "none";
  std::string out;
  double domain_a = 0.0;
  double domain_b = 1.0;
};

// Flat key=value file, one pair per line, '#' starts a comment. Keys match
// the CLI options: method, k, kprime, elements, beta, source, grading,
// preset, domain, out. Unknown keys or malformed values raise ConfigError
// with the offending line number.
RunConfig parse_config_file(const std::string& path);

struct RunResult {
  std::string csv;
  // True when some row violated the guaranteed bound although hat
  // orthogonality held; the CLI maps this to a nonzero exit code.
  bool bound_violation = false;
};

// Built-in studies. table1/table2: effectivity across beta for the
// ultra-weak Petrov-Galerkin and dG schemes, per-element source. table3/
// table4: full estimator columns for the arctan source at beta = 1.
RunResult run_preset(const std::string& name);
const std::vector<std::string>& preset_names();

// cfg.preset != "none" delegates to run_preset; output is identical.
RunResult run_custom(const RunConfig& cfg);

// Randomized guaranteed-bound sweep: `cases` solve/estimate rounds over
// random meshes, degrees, velocities, and piecewise-polynomial sources.
struct CheckResult {
  int cases = 0;
  int failures = 0;
  std::string log;
  bool ok() const { return failures == 0; }
};
CheckResult run_check(std::uint64_t seed, int cases);

} // namespace advest
