#pragma once

#include <functional>
#include <string>
#include <vector>

#include "twave/factors.hpp"
#include "twave/iterate.hpp"

namespace twave {

/// Ordered parameter values visited by the continuation driver.
struct HomotopyPath {
  std::string parameter = "Gamma";
  std::vector<double> values;
  IterationConfig config;
  int max_bisections = 4;

  /// Throws ParameterError unless the values are strictly monotone and finite.
  /// A single value is allowed and amounts to one solve.
  void validate() const;
};

/// Builds the problem at a parameter value.
using ProblemFamily = std::function<ProblemPtr(double)>;
/// Builds the factor paired with a problem.
using FactorBuilder = std::function<FactorPtr(const ProblemPtr&)>;

struct StageResult {
  double parameter = 0.0;
  bool inserted = false;  // created by step bisection
  SolveResult result;
};

struct ContinuationResult {
  std::vector<StageResult> stages;
  bool completed = false;
  std::string message;
};

/// Solves along the path, warm-starting each stage from the previous converged
/// profile. A failed step is bisected up to path.max_bisections times; after
/// that the driver stops and returns the stages reached so far.
ContinuationResult continue_solve(const ProblemFamily& family, const HomotopyPath& path,
                                  const Field& seed, const FactorBuilder& factor);

}  // namespace twave
