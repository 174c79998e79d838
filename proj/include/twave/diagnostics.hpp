#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twave/factors.hpp"
#include "twave/krylov.hpp"
#include "twave/problems.hpp"

namespace twave {

/// S v = L^{-1} N'(u*) v, projected.
Field iteration_matrix_action(const Problem& problem, const Field& u_star, const Field& v);

/// F'(u*) v = S v + u* (grad s(u*) . v).
Field jacobian_F_action(const Problem& problem, const StabilizingFactor& factor,
                        const Field& u_star, const Field& v);

/// Realified versions of the two actions above.
LinearOperator iteration_matrix_operator(const Problem& problem, const Field& u_star);
LinearOperator jacobian_F_operator(const Problem& problem, const StabilizingFactor& factor,
                                   const Field& u_star);

enum class EigenMethod { automatic, dense, krylov };

/// Largest dimension handled by the dense path under EigenMethod::automatic.
inline constexpr Eigen::Index kDenseEigenLimit = 1024;

/// |lambda| within this distance of 1 counts as unit modulus.
inline constexpr double kUnitClusterTolerance = 1e-4;

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // descending modulus
  std::vector<double> residuals;  // ||A v - lambda v|| / ||v||
  std::vector<bool> unit_cluster;
  std::string method;
  bool converged = true;
  Eigen::MatrixXcd eigenvectors;  // realified coordinates, one column per eigenvalue

  std::vector<double> moduli() const;
};

/// k largest-modulus eigenvalues of a real operator of the given dimension.
SpectrumReport top_eigenvalues(const LinearOperator& action, Eigen::Index dimension, int k,
                               EigenMethod method = EigenMethod::automatic);

struct HypothesisReport {
  double p = 0.0;
  bool dominant_simple = false;      // exactly one computed eigenvalue at p
  bool p_is_dominant = false;        // p has the largest modulus
  bool bounded_by_one = false;       // every other computed |lambda| <= 1 + tol
  std::vector<cplx> above_one;       // the offending eigenvalues
  int unit_cluster_size = 0;
  int unit_cluster_rank = 0;         // numerical rank of the cluster eigenvectors
  bool unit_cluster_semisimple = true;  // advisory
  std::optional<double> seed_component;  // relative size of the seed error in the unit eigenspace
  std::vector<std::string> verdicts;
};

/// Checks the spectral hypotheses on an S spectrum. When seed_error is
/// given (realified u0 - u*), its component in the unit-modulus eigenspace is
/// quantified.
HypothesisReport check_hypotheses(const SpectrumReport& spectrum_S, double p,
                                  const std::optional<Eigen::VectorXd>& seed_error = std::nullopt);

struct ShiftCheck {
  bool passed = false;
  double tolerance = 1e-4;
  double max_difference = 0.0;
  std::vector<cplx> expected;  // (spec S minus p) plus p + q, descending modulus
  std::vector<cplx> observed;  // spec F'
  std::vector<double> differences;  // per observed eigenvalue
  std::string note;
};

/// Verifies spec(F') = (spec(S) \ {p}) U {p + q} on the computed part of the spectra.
ShiftCheck spectrum_shift_check(const SpectrumReport& spectrum_S, const SpectrumReport& spectrum_F,
                                double p, double q, double tolerance = 1e-4);

/// i u for gauge invariance, spectral derivatives for translations.
std::vector<Field> symmetry_generators(const Problem& problem, const Field& u);

struct ErrorDecomposition {
  double alpha = 0.0;
  std::vector<double> beta;
  Field remainder;
  double gram_condition = 1.0;
};

/// Orthogonal projection of e onto span{u*, generators}. Throws IllConditionedError
/// when the Gram matrix condition number exceeds 1e12.
ErrorDecomposition decompose_error(const Field& e, const Field& u_star,
                                   const std::vector<Field>& generators);

struct OrbitFit {
  double slope = 0.0;
  double intercept = 0.0;
  double intercept_mod_2pi = 0.0;
  int window_begin = 0;  // node indices, inclusive
  int window_end = 0;
  // Filled by orbit_match.
  double x0 = 0.0;      // profile center
  double theta0 = 0.0;  // phase constant at the center
  double group_shift = 0.0;             // -x0: translation parameter of u -> u(x + s)
  double group_phase_combination = 0.0;  // theta0 + (lambda2/2) group_shift
  double modulus_distance = 0.0;  // sup | |U_f| - |U_orbit| |
  double sup_distance = 0.0;      // sup | U_f - U_orbit |
};

/// Least-squares line through the unwrapped phase of u on a window (default:
/// the contiguous run around the modulus peak where |u| >= 0.05 max |u|).
OrbitFit fit_phase_line(const Field& u, std::optional<std::pair<int, int>> window = std::nullopt);

/// Nearest element of the soliton orbit: x0 from the modulus, theta0 from the
/// Hermitian pairing with the re-centered exact profile.
OrbitFit orbit_match(const Field& u, const SolitonParameters& params);

}  // namespace twave
