#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twave/factors.hpp"
#include "twave/problems.hpp"

namespace twave {

enum class StopRule { residual, residual_and_factor };

struct IterationConfig {
  int max_iterations = 500;
  double residual_tolerance = 1e-12;
  double factor_tolerance = 1e-13;
  /// The run diverges when the norm or residual exceeds this value, or when the
  /// norm falls below the seed norm divided by it.
  double divergence_guard = 1e8;
  StopRule stop_rule = StopRule::residual;
  bool keep_history = false;

  /// Throws ParameterError on non-positive tolerances or a guard <= 1.
  void validate() const;
};

enum class SolveStatus { converged, diverged, max_iterations };

std::string to_string(SolveStatus status);
std::string to_string(StopRule rule);

struct IterationRecord {
  int n = 0;
  double residual = 0.0;
  /// |s(u_n) - 1|; NaN when no factor is used.
  double factor_discrepancy = 0.0;
  double norm = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::max_iterations;
  std::string message;
  std::optional<Field> first;
  std::optional<Field> last;
  std::vector<Field> history;  // only with keep_history
};

struct SolveResult {
  Field solution;
  IterationTrace trace;

  /// Number of steps taken (records minus the initial one).
  int iterations() const { return static_cast<int>(trace.records.size()) - 1; }
  bool converged() const { return trace.status == SolveStatus::converged; }
  double final_residual() const { return trace.records.back().residual; }
  double final_factor_discrepancy() const { return trace.records.back().factor_discrepancy; }
};

/// solve_L(N(u)), projected.
Field classical_step(const Problem& problem, const Field& u);

/// solve_L(s(u) N(u)), projected, with the evaluated s(u).
std::pair<Field, double> stabilized_step(const Problem& problem, const StabilizingFactor& factor,
                                         const Field& u);

/// ||Lu - N(u)|| with pinned modes excluded.
double residual(const Problem& problem, const Field& u);

/// Classical iteration when factor is null, stabilized otherwise. Divergence
/// and factor breakdowns are reported in the trace, never thrown.
SolveResult solve(const Problem& problem, const StabilizingFactor* factor, const Field& u0,
                  const IterationConfig& config);

/// Newton's method on the preconditioned system u - L^{-1} N(u) = 0 with a
/// residual-decrease line search. Dense solves up to kNewtonDenseLimit
/// unknowns, restarted GMRES above.
SolveResult newton_solve(const Problem& problem, const Field& u0, const IterationConfig& config);

inline constexpr Eigen::Index kNewtonDenseLimit = 2048;

}  // namespace twave
