#include "twave/iterate.hpp"

#include <cmath>
#include <limits>

#include "twave/errors.hpp"
#include "twave/krylov.hpp"

namespace twave {

void IterationConfig::validate() const {
  if (max_iterations < 0) throw ParameterError("max_iterations must be non-negative");
  if (!(residual_tolerance > 0.0)) throw ParameterError("residual_tolerance must be positive");
  if (!(factor_tolerance > 0.0)) throw ParameterError("factor_tolerance must be positive");
  if (!(divergence_guard > 1.0)) throw ParameterError("divergence_guard must exceed 1");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

std::string to_string(StopRule rule) {
  return rule == StopRule::residual ? "residual" : "residual_and_factor";
}

Field classical_step(const Problem& problem, const Field& u) {
  return problem.project(problem.solve_L(problem.project(problem.apply_N(u))));
}

std::pair<Field, double> stabilized_step(const Problem& problem, const StabilizingFactor& factor,
                                         const Field& u) {
  const double s = factor.evaluate(u);
  Field rhs = problem.project(problem.apply_N(u));
  rhs *= s;
  return {problem.project(problem.solve_L(rhs)), s};
}

double residual(const Problem& problem, const Field& u) {
  return problem.project(problem.apply_L(u) - problem.apply_N(u)).norm();
}

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

class TraceBuilder {
 public:
  TraceBuilder(const IterationConfig& config) : config_(config) {}

  void record(int n, const Field& u, double res, double discrepancy) {
    trace_.records.push_back({n, res, discrepancy, u.norm()});
    if (!trace_.first) trace_.first = u;
    if (config_.keep_history) trace_.history.push_back(u);
  }

  bool blown_up(const Field& u, double res) const {
    const double norm = u.norm();
    return !u.is_finite() || !std::isfinite(res) || norm > config_.divergence_guard ||
           res > config_.divergence_guard;
  }

  // The amplitude escaping toward the trivial solution is the other face of
  // the unstable scaling direction.
  bool collapsed(const Field& u) const {
    return !trace_.records.empty() &&
           u.norm() < trace_.records.front().norm / config_.divergence_guard;
  }

  bool met(double res, double discrepancy) const {
    if (!(res <= config_.residual_tolerance)) return false;
    if (config_.stop_rule == StopRule::residual_and_factor && !std::isnan(discrepancy))
      return discrepancy <= config_.factor_tolerance;
    return true;
  }

  SolveResult finish(Field u, SolveStatus status, std::string message) {
    trace_.status = status;
    trace_.message = std::move(message);
    trace_.last = u;
    return SolveResult{std::move(u), std::move(trace_)};
  }

 private:
  const IterationConfig& config_;
  IterationTrace trace_;
};

Field checked_seed(const Problem& problem, const Field& u0) {
  if (!(u0.grid() == problem.grid())) throw ParameterError("seed grid does not match the problem");
  if (!u0.is_finite()) throw ParameterError("seed must be finite");
  Field u = problem.project(Field(u0.grid(), problem.kind(), u0.values()));
  if (u.max_abs() == 0.0) throw ParameterError("seed must be nonzero");
  return u;
}

}  // namespace

SolveResult solve(const Problem& problem, const StabilizingFactor* factor, const Field& u0,
                  const IterationConfig& config) {
  config.validate();
  Field u = checked_seed(problem, u0);
  TraceBuilder tb(config);

  double s = kNaN;
  auto evaluate_factor = [&](const Field& x) -> std::string {
    if (!factor) return {};
    try {
      s = factor->evaluate(x);
    } catch (const Error& e) {
      return e.what();
    }
    return {};
  };

  double res = residual(problem, u);
  std::string failure = evaluate_factor(u);
  tb.record(0, u, res, factor ? std::abs(s - 1.0) : kNaN);
  if (!failure.empty()) return tb.finish(u, SolveStatus::diverged, "factor breakdown: " + failure);
  if (tb.blown_up(u, res)) return tb.finish(u, SolveStatus::diverged, "seed exceeds the guard");
  if (tb.met(res, factor ? std::abs(s - 1.0) : kNaN))
    return tb.finish(u, SolveStatus::converged, "seed satisfies the stopping rule");

  for (int n = 1; n <= config.max_iterations; ++n) {
    Field rhs = problem.project(problem.apply_N(u));
    if (factor) rhs *= s;
    u = problem.project(problem.solve_L(rhs));
    res = residual(problem, u);
    if (tb.blown_up(u, res)) {
      tb.record(n, u, std::isfinite(res) ? res : std::numeric_limits<double>::infinity(),
                factor ? std::abs(s - 1.0) : kNaN);
      return tb.finish(u, SolveStatus::diverged, "divergence guard tripped");
    }
    if (tb.collapsed(u)) {
      tb.record(n, u, res, factor ? std::abs(s - 1.0) : kNaN);
      return tb.finish(u, SolveStatus::diverged,
                       "divergence guard tripped: amplitude collapsed toward zero");
    }
    failure = evaluate_factor(u);
    const double discrepancy = factor ? std::abs(s - 1.0) : kNaN;
    tb.record(n, u, res, discrepancy);
    if (!failure.empty())
      return tb.finish(u, SolveStatus::diverged, "factor breakdown: " + failure);
    if (tb.met(res, discrepancy)) return tb.finish(u, SolveStatus::converged, "");
  }
  return tb.finish(u, SolveStatus::max_iterations, "iteration limit reached");
}

// ---------------------------------------------------------------------------
// Newton

namespace {

// Solves (I - L^{-1} N'(u)) d = g in realified coordinates.
Eigen::VectorXd newton_direction(const Problem& problem, const Field& u, const Eigen::VectorXd& g) {
  const Grid& grid = problem.grid();
  const ScalarKind kind = problem.kind();
  const LinearOperator op = [&](const Eigen::VectorXd& x) {
    const Field v = from_real(grid, kind, x);
    const Field sv = problem.project(problem.solve_L(problem.project(problem.jacobian_N(u, v))));
    return Eigen::VectorXd(x - realify(sv));
  };
  const Eigen::Index n = g.size();
  if (n <= kNewtonDenseLimit) {
    const Eigen::MatrixXd a = assemble(op, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rcond() > 1e-12) return lu.solve(g);
    // Symmetry kernels make the Jacobian singular; take the minimum-norm step.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(1e-10);
    Eigen::VectorXd d = cod.solve(g);
    if (!d.allFinite()) throw SingularJacobianError("Newton system could not be solved");
    return d;
  }
  const GmresResult r = gmres(op, g, 1e-12, 80, 4000);
  if (!r.x.allFinite()) throw SingularJacobianError("GMRES produced a non-finite Newton step");
  return r.x;
}

}  // namespace

SolveResult newton_solve(const Problem& problem, const Field& u0, const IterationConfig& config) {
  config.validate();
  if (!problem.has_jacobian()) throw ParameterError("Newton needs the Jacobian of N");
  Field u = checked_seed(problem, u0);
  TraceBuilder tb(config);
  double res = residual(problem, u);
  tb.record(0, u, res, kNaN);
  if (tb.blown_up(u, res)) return tb.finish(u, SolveStatus::diverged, "seed exceeds the guard");
  if (tb.met(res, kNaN)) return tb.finish(u, SolveStatus::converged, "seed satisfies the stopping rule");

  for (int n = 1; n <= config.max_iterations; ++n) {
    const Field g = u - classical_step(problem, u);
    const Eigen::VectorXd d = newton_direction(problem, u, realify(g));
    const Field step = from_real(problem.grid(), problem.kind(), d);
    // Halve the step until the residual decreases.
    double t = 1.0;
    Field trial = problem.project(u - step);
    double trial_res = residual(problem, trial);
    while (!(trial_res < res) && t > 1e-3) {
      t *= 0.5;
      trial = problem.project(u - t * step);
      trial_res = residual(problem, trial);
    }
    if (!(trial_res < res)) {
      // No decrease along the Newton direction: the residual is at its floor.
      return tb.finish(u, SolveStatus::max_iterations, "line search stalled above tolerance");
    }
    u = std::move(trial);
    res = trial_res;
    tb.record(n, u, res, kNaN);
    if (tb.blown_up(u, res)) return tb.finish(u, SolveStatus::diverged, "divergence guard tripped");
    if (tb.met(res, kNaN)) return tb.finish(u, SolveStatus::converged, "");
  }
  return tb.finish(u, SolveStatus::max_iterations, "iteration limit reached");
}

}  // namespace twave
