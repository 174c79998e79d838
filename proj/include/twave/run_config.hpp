#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twave/continuation.hpp"
#include "twave/diagnostics.hpp"
#include "twave/report_io.hpp"

namespace twave {

struct ProblemSpec {
  std::string family = "ground_state";  // ground_state | soliton | benjamin
  // Grid. For benjamin, x and z default to the same values.
  double half_length = 50.0;
  int points = 512;
  double half_length_z = 0.0;
  int points_z = 0;
  // ground_state
  std::string potential = "sech2";  // sech2 | double_well | zero
  double potential_amplitude = 1.0;
  double well_separation = 1.0;
  double mu = 1.3;
  CubicSign sign = CubicSign::focusing;
  // soliton
  SolitonParameters soliton;
  // benjamin
  double gamma_b = 0.0;
  double cs = 1.0;
};

struct SeedSpec {
  std::string kind = "gaussian";  // gaussian | exact_perturbed | file
  double amplitude = 1.0;
  double width = 1.0;
  bool antisymmetric = false;
  double eps1 = 0.0;  // gauge direction
  double eps2 = 0.0;  // translation direction
  std::string path;
};

struct SpectrumSpec {
  int k = 6;
  std::string at = "solution";  // solution | seed | exact | file
  std::string path;
  EigenMethod method = EigenMethod::automatic;
};

struct ComparisonSpec {
  double at = 0.0;
  std::vector<std::string> factors;
};

struct ContinuationSpec {
  std::string parameter = "Gamma";
  std::vector<double> values;
  int max_bisections = 4;
  std::optional<ComparisonSpec> compare;
};

struct RunConfig {
  std::string name = "run";
  ProblemSpec problem;
  std::string factor = "petviashvili:optimal";  // or "none"
  bool allow_unstable = false;
  std::string solver = "stabilized";  // stabilized | newton
  IterationConfig iteration;
  SeedSpec seed;
  SpectrumSpec spectrum;
  std::vector<std::pair<double, double>> perturbations;  // orbital (eps1, eps2) runs
  std::optional<ContinuationSpec> continuation;
  std::string output_dir = "out";
  Json source;  // the parsed document, echoed into summaries
};

/// Parses a configuration document. Unknown keys and malformed values raise
/// ConfigError naming the offending field.
RunConfig parse_run_config(const Json& document);
RunConfig load_run_config(const std::filesystem::path& path);

/// Built-in recipes keyed by name; the JSON text is identical to recipes/<name>.json.
const std::map<std::string, std::string>& builtin_recipes();
RunConfig recipe_config(const std::string& name);

Grid make_grid(const ProblemSpec& spec);
ProblemPtr make_problem(const ProblemSpec& spec);
/// Same family with the continuation parameter replaced.
ProblemPtr make_problem(const ProblemSpec& spec, const std::string& parameter, double value);
/// nullptr for "none".
FactorPtr make_factor(const RunConfig& config, const ProblemPtr& problem);
FactorPtr make_factor(const std::string& descriptor, bool allow_unstable, const ProblemPtr& problem);
Field make_seed(const RunConfig& config, const Problem& problem);

}  // namespace twave
