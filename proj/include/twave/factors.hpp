#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "twave/problems.hpp"

namespace twave {

/// A positively homogeneous map f used by the inner-product factor family.
class HomogeneousMap {
 public:
  using Apply = std::function<Field(const Field&)>;
  using Derivative = std::function<Field(const Field&, const Field&)>;

  HomogeneousMap(std::string name, double degree, Apply apply, Derivative derivative);

  static HomogeneousMap identity();
  /// Node-wise square u.^2 (degree 2).
  static HomogeneousMap square();
  static HomogeneousMap by_name(const std::string& name);

  const std::string& name() const { return name_; }
  double degree() const { return degree_; }
  Field operator()(const Field& u) const { return apply_(u); }
  /// f'(u) v.
  Field derivative(const Field& u, const Field& v) const { return derivative_(u, v); }

  /// Checks f(t u) = t^d f(u) on u for a few t > 0; throws ParameterError on failure.
  void validate_on(const Field& u) const;

 private:
  std::string name_;
  double degree_;
  Apply apply_;
  Derivative derivative_;
};

enum class FactorFamily { petviashvili, inner, norm };

/// s(u) with s(u*) = 1 at solutions and s(t u) = t^q s(u).
class StabilizingFactor {
 public:
  StabilizingFactor(ProblemPtr problem, double gamma);
  virtual ~StabilizingFactor() = default;

  virtual FactorFamily family() const = 0;
  virtual std::string descriptor() const = 0;
  virtual double evaluate(const Field& u) const = 0;
  /// Derivative of s at u in the direction v.
  virtual double directional_derivative(const Field& u, const Field& v) const = 0;

  double gamma() const { return gamma_; }
  /// Homogeneity degree q = gamma (1 - p).
  double degree() const { return gamma_ * (1.0 - problem_->degree()); }
  /// p + q, the eigenvalue that replaces p in the Jacobian of the stabilized map.
  double shifted_eigenvalue() const { return problem_->degree() + degree(); }
  const Problem& problem() const { return *problem_; }
  const ProblemPtr& problem_ptr() const { return problem_; }

  /// Throws PropertyViolationError unless |p + q| < 1.
  void check_stability() const;

 protected:
  /// ratio^gamma with the negative-base rule for non-integer gamma.
  double raise(double ratio) const;

 private:
  ProblemPtr problem_;
  double gamma_;
};

using FactorPtr = std::shared_ptr<const StabilizingFactor>;

/// Factor construction options. `allow_unstable` skips the |p + q| < 1 check so
/// that boundary exponents can be studied.
struct FactorOptions {
  bool allow_unstable = false;
};

FactorPtr petviashvili_factor(double gamma, ProblemPtr problem, FactorOptions options = {});
FactorPtr inner_factor(HomogeneousMap f, double gamma, ProblemPtr problem,
                       FactorOptions options = {});
/// r in [1, inf]; pass std::numeric_limits<double>::infinity() for the max norm.
FactorPtr norm_factor(double r, double gamma, ProblemPtr problem, FactorOptions options = {});

/// gamma with gamma (1 - p) = -p.
double optimal_gamma(double p);

/// Parses "petviashvili:g", "inner:f=<identity|square>:g" or "norm:<r|inf>:g"
/// where g is a number or "optimal". Throws ConfigError.
FactorPtr parse_factor(const std::string& descriptor, ProblemPtr problem,
                       FactorOptions options = {});

/// Realified gradient of s at u, one directional derivative per coordinate.
Eigen::VectorXd factor_gradient(const StabilizingFactor& factor, const Field& u);

/// Shortest decimal that round-trips.
std::string format_number(double value);

}  // namespace twave
