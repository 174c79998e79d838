#pragma once

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "twave/commands.hpp"
#include "twave/errors.hpp"

namespace twave::testing {

inline double rel(const Field& a, const Field& b) { return (a - b).norm() / b.norm(); }

/// Central differences of a smooth map converge at second order; for a
/// quadratic map they are exact, so the coarse error is already roundoff.
inline bool second_order_consistent(double err_coarse, double err_fine, double scale) {
  return err_coarse <= 1e-10 * scale || std::log10(err_coarse / err_fine) >= 1.9;
}

inline Grid1D line_grid() { return Grid1D(50.0, 512); }

/// Ground state with V = sech^2 and mu = 1.3, solved once per process.
struct GroundState {
  ProblemPtr problem;
  Field solution;
};

inline const GroundState& ground_state() {
  static const GroundState gs = [] {
    const Grid1D g = line_grid();
    ProblemPtr p = nls_ground_state(sech2_potential(g, 1.0), 1.3, g);
    const FactorPtr s = petviashvili_factor(1.5, p);
    const SolveResult r = solve(*p, s.get(), gaussian_seed(g, 1.0, 1.0), IterationConfig{});
    REQUIRE(r.converged());
    return GroundState{p, r.solution};
  }();
  return gs;
}

inline std::shared_ptr<SolitonProblem> soliton(double sigma = 1.0) {
  SolitonParameters prm;
  prm.sigma = sigma;
  return nls_soliton(prm, line_grid());
}

/// Dense synthetic system L u = u.^2 whose solution is the all-ones vector:
/// L = M + diag(c) with c fixed by L 1 = 1.
inline std::shared_ptr<HadamardPowerProblem> synthetic_problem(int n, unsigned seed_value) {
  Eigen::MatrixXd m(n, n);
  unsigned state = seed_value;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      state = state * 1664525u + 1013904223u;
      m(i, j) = 0.3 * (static_cast<double>(state >> 8) / static_cast<double>(1u << 24) - 0.5);
    }
  for (int i = 0; i < n; ++i) m(i, i) += 1.0 + 0.5 * i;
  const Eigen::VectorXd row_sums = m.rowwise().sum();
  for (int i = 0; i < n; ++i) m(i, i) += 1.0 - row_sums[i];
  return std::make_shared<HadamardPowerProblem>(m, 2);
}

inline Field ones(const Problem& p) {
  return Field::real(p.grid(), Eigen::VectorXd::Ones(p.grid().size()));
}

}  // namespace twave::testing
