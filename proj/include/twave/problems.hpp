#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twave/field.hpp"

namespace twave {

/// Continuous symmetry of a discrete system. Each one contributes an
/// infinitesimal generator: i*u for gauge, d/dx u or d/dz u for translations.
enum class Symmetry { gauge, translation_x, translation_z };

/// A nonlinear system L u = N(u) with L linear and nonsingular (modulo pinned
/// modes) and N positively homogeneous of degree p.
class Problem {
 public:
  Problem(Grid grid, ScalarKind kind, double degree);
  virtual ~Problem() = default;

  virtual std::string name() const = 0;

  const Grid& grid() const { return grid_; }
  ScalarKind kind() const { return kind_; }
  double degree() const { return degree_; }

  virtual Field apply_L(const Field& u) const = 0;
  virtual Field solve_L(const Field& b) const = 0;
  virtual Field apply_N(const Field& u) const = 0;

  virtual bool has_jacobian() const { return false; }
  /// N'(u) v. Real-linear in v.
  virtual Field jacobian_N(const Field& u, const Field& v) const;

  /// Zeroes the pinned Fourier modes. Identity when nothing is pinned.
  virtual Field project(const Field& f) const { return f; }

  virtual std::vector<Symmetry> symmetries() const { return {}; }

  Field zero() const { return Field(grid_, kind_); }

 private:
  Grid grid_;
  ScalarKind kind_;
  double degree_;
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// Sign of the cubic term in the ground-state system.
enum class CubicSign {
  focusing,    ///< N(U) = -U.^3
  defocusing,  ///< N(U) = +U.^3
};

/// Real ground states U'' + V U - mu U = N(U) discretized by Fourier collocation:
/// L = D^2 + diag(V) - mu I assembled densely and LU-factorized once.
class GroundStateProblem final : public Problem {
 public:
  GroundStateProblem(const Grid1D& grid, Eigen::VectorXd potential, double mu, CubicSign sign);

  std::string name() const override { return "ground_state"; }
  Field apply_L(const Field& u) const override;
  Field solve_L(const Field& b) const override;
  Field apply_N(const Field& u) const override;
  bool has_jacobian() const override { return true; }
  Field jacobian_N(const Field& u, const Field& v) const override;

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& potential() const { return potential_; }
  double mu() const { return mu_; }
  CubicSign sign() const { return sign_; }

 private:
  double signed_unit() const { return sign_ == CubicSign::focusing ? -1.0 : 1.0; }

  Eigen::VectorXd potential_;
  double mu_;
  CubicSign sign_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

std::shared_ptr<GroundStateProblem> nls_ground_state(const Eigen::VectorXd& potential, double mu,
                                                     const Grid1D& grid,
                                                     CubicSign sign = CubicSign::focusing);

/// V(x) = amplitude * sech^2(x).
Eigen::VectorXd sech2_potential(const Grid1D& grid, double amplitude);
/// V(x) = amplitude * (sech^2(x - d) + sech^2(x + d)).
Eigen::VectorXd double_well_potential(const Grid1D& grid, double amplitude, double separation);

struct SolitonParameters {
  double sigma = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double x0 = 0.0;
  double theta0 = 0.0;

  double a() const { return lambda1 - 0.25 * lambda2 * lambda2; }
};

/// Complex NLS soliton profiles U'' + |U|^{2 sigma} U - lambda1 U - i lambda2 U' = 0,
/// written as L U = N(U) with L diagonal in Fourier space.
class SolitonProblem final : public Problem {
 public:
  SolitonProblem(const SolitonParameters& params, const Grid1D& grid);

  std::string name() const override { return "soliton"; }
  Field apply_L(const Field& u) const override;
  Field solve_L(const Field& b) const override;
  Field apply_N(const Field& u) const override;
  bool has_jacobian() const override { return true; }
  Field jacobian_N(const Field& u, const Field& v) const override;
  std::vector<Symmetry> symmetries() const override {
    return {Symmetry::gauge, Symmetry::translation_x};
  }

  const SolitonParameters& parameters() const { return params_; }
  const Eigen::VectorXcd& symbol() const { return symbol_; }

  /// Orbit element rho(x - x0) exp(i (theta(x - x0) + theta0)).
  Field exact_profile(double x0, double theta0) const;
  Field exact_profile() const { return exact_profile(params_.x0, params_.theta0); }

 private:
  SolitonParameters params_;
  Eigen::VectorXcd symbol_;
};

std::shared_ptr<SolitonProblem> nls_soliton(const SolitonParameters& params, const Grid1D& grid);

/// Closed-form soliton sampled at the nodes.
Field exact_soliton_profile(const SolitonParameters& params, const Grid1D& grid);

/// Lump profiles of the 2D Benjamin equation in Fourier form:
/// (kx^2 (cs + 2 Gamma |kx| + kx^2) + kz^2) eta_hat = kx^2 (eta^2)_hat,
/// with the (0,0) mode pinned at zero. Gamma = 0 is KP-I.
class BenjaminLumpProblem final : public Problem {
 public:
  BenjaminLumpProblem(double gamma, double cs, const Grid2D& grid);

  std::string name() const override { return "benjamin"; }
  Field apply_L(const Field& u) const override;
  Field solve_L(const Field& b) const override;
  Field apply_N(const Field& u) const override;
  bool has_jacobian() const override { return true; }
  Field jacobian_N(const Field& u, const Field& v) const override;
  Field project(const Field& f) const override;
  std::vector<Symmetry> symmetries() const override {
    return {Symmetry::translation_x, Symmetry::translation_z};
  }

  double gamma() const { return gamma_; }
  double cs() const { return cs_; }
  const Eigen::VectorXd& symbol() const { return symbol_; }

  static double symbol_at(double kx, double kz, double gamma, double cs) {
    return kx * kx * (cs + 2.0 * gamma * std::abs(kx) + kx * kx) + kz * kz;
  }

 private:
  Field nonlinear_transform(const Eigen::VectorXcd& product) const;

  double gamma_;
  double cs_;
  Eigen::VectorXd symbol_;
  Eigen::VectorXd kx_squared_;
};

std::shared_ptr<BenjaminLumpProblem> benjamin_lump(double gamma, double cs, const Grid2D& grid);

/// Dense synthetic system L u = u.^power on a 1D index grid. Used for
/// brute-force checks of the iteration theory.
class HadamardPowerProblem final : public Problem {
 public:
  HadamardPowerProblem(Eigen::MatrixXd matrix, int power);

  std::string name() const override { return "hadamard"; }
  Field apply_L(const Field& u) const override;
  Field solve_L(const Field& b) const override;
  Field apply_N(const Field& u) const override;
  bool has_jacobian() const override { return true; }
  Field jacobian_N(const Field& u, const Field& v) const override;

  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  int power_;
};

/// A exp(-|x|^2 / w^2), multiplied by x when antisymmetric. Tensorized on 2D grids.
Field gaussian_seed(const Grid& grid, double amplitude, double width, bool antisymmetric = false);

}  // namespace twave
