#include "twave/factors.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "twave/errors.hpp"

namespace twave {

namespace {

constexpr double kDegenerate = 1e-14;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ConfigError("factor descriptor: cannot parse " + what + " from '" + text + "'");
  return value;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------

HomogeneousMap::HomogeneousMap(std::string name, double degree, Apply apply, Derivative derivative)
    : name_(std::move(name)), degree_(degree), apply_(std::move(apply)),
      derivative_(std::move(derivative)) {
  if (!(degree_ >= 1.0)) throw ParameterError("homogeneous map degree must be >= 1");
}

HomogeneousMap HomogeneousMap::identity() {
  return HomogeneousMap(
      "identity", 1.0, [](const Field& u) { return u; },
      [](const Field&, const Field& v) { return v; });
}

HomogeneousMap HomogeneousMap::square() {
  return HomogeneousMap(
      "square", 2.0,
      [](const Field& u) {
        return Field(u.grid(), u.kind(), u.values().array().square().matrix());
      },
      [](const Field& u, const Field& v) {
        return Field(u.grid(), u.is_complex() || v.is_complex() ? ScalarKind::complex : u.kind(),
                     (2.0 * u.values().array() * v.values().array()).matrix());
      });
}

HomogeneousMap HomogeneousMap::by_name(const std::string& name) {
  if (name == "identity") return identity();
  if (name == "square") return square();
  throw ConfigError("unknown homogeneous map '" + name + "' (expected identity or square)");
}

void HomogeneousMap::validate_on(const Field& u) const {
  const Field fu = apply_(u);
  const double scale = fu.norm();
  if (!(scale > 0.0) || !fu.is_finite()) throw ParameterError("f(u) vanishes on the probe field");
  for (double t : {0.5, 2.0, 3.0}) {
    const Field ftu = apply_(t * u);
    const double dev = (ftu - std::pow(t, degree_) * fu).norm();
    if (dev > 1e-10 * std::pow(t, degree_) * scale)
      throw ParameterError("map '" + name_ + "' is not homogeneous of degree " +
                           format_number(degree_));
  }
}

// ---------------------------------------------------------------------------

StabilizingFactor::StabilizingFactor(ProblemPtr problem, double gamma)
    : problem_(std::move(problem)), gamma_(gamma) {
  if (!problem_) throw ParameterError("factor needs a problem");
  if (!std::isfinite(gamma_)) throw ParameterError("factor exponent must be finite");
}

void StabilizingFactor::check_stability() const {
  const double pq = shifted_eigenvalue();
  if (!(std::abs(pq) < 1.0))
    throw PropertyViolationError("factor " + descriptor() + " gives |p + q| = " +
                                 format_number(std::abs(pq)) + " >= 1");
}

double StabilizingFactor::raise(double ratio) const {
  if (!std::isfinite(ratio)) throw DegenerateDenominatorError("stabilizing ratio is not finite");
  if (ratio < 0.0 && gamma_ != std::round(gamma_))
    throw NegativeBaseError("negative ratio " + format_number(ratio) +
                            " raised to non-integer exponent " + format_number(gamma_));
  return std::pow(ratio, gamma_);
}

namespace {

/// (<Lu, f(u)> / <N(u), f(u)>)^gamma. The Petviashvili factor is f = identity.
class InnerFactor final : public StabilizingFactor {
 public:
  InnerFactor(HomogeneousMap f, double gamma, ProblemPtr problem, bool petviashvili)
      : StabilizingFactor(std::move(problem), gamma), f_(std::move(f)), petviashvili_(petviashvili) {}

  FactorFamily family() const override {
    return petviashvili_ ? FactorFamily::petviashvili : FactorFamily::inner;
  }

  std::string descriptor() const override {
    if (petviashvili_) return "petviashvili:" + format_number(gamma());
    return "inner:f=" + f_.name() + ":" + format_number(gamma());
  }

  double evaluate(const Field& u) const override {
    const Parts parts = compute(u);
    return raise(parts.num / parts.den);
  }

  double directional_derivative(const Field& u, const Field& v) const override {
    const Problem& P = problem();
    if (!P.has_jacobian()) return central_difference(*this, u, v);
    const Parts parts = compute(u);
    const Field fv = f_.derivative(u, v);
    const double dnum = inner(P.apply_L(v), parts.fu) + inner(parts.lu, fv);
    const double dden = inner(P.jacobian_N(u, v), parts.fu) + inner(parts.nu, fv);
    const double ratio = parts.num / parts.den;
    const double dratio = (dnum * parts.den - parts.num * dden) / (parts.den * parts.den);
    if (gamma() == 1.0) return dratio;
    if (ratio < 0.0 && gamma() != std::round(gamma()))
      throw NegativeBaseError("negative ratio in factor derivative");
    return gamma() * std::pow(ratio, gamma() - 1.0) * dratio;
  }

  static double central_difference(const StabilizingFactor& s, const Field& u, const Field& v) {
    const double eps = 1e-6 * u.norm() / v.norm();
    return (s.evaluate(u + eps * v) - s.evaluate(u - eps * v)) / (2.0 * eps);
  }

 private:
  struct Parts {
    Field lu, nu, fu;
    double num, den;
  };

  Parts compute(const Field& u) const {
    const Problem& P = problem();
    Field lu = P.project(P.apply_L(u));
    Field nu = P.project(P.apply_N(u));
    Field fu = f_(u);
    const double num = inner(lu, fu);
    const double den = inner(nu, fu);
    if (!(std::abs(den) > kDegenerate * nu.norm() * fu.norm()))
      throw DegenerateDenominatorError("<N(u), f(u)> vanishes");
    return {std::move(lu), std::move(nu), std::move(fu), num, den};
  }

  HomogeneousMap f_;
  bool petviashvili_;
};

/// (||Lu||_r / ||N(u)||_r)^gamma.
class NormFactor final : public StabilizingFactor {
 public:
  NormFactor(double r, double gamma, ProblemPtr problem)
      : StabilizingFactor(std::move(problem), gamma), r_(r) {
    if (!(r_ >= 1.0)) throw ParameterError("norm factor requires r >= 1");
  }

  FactorFamily family() const override { return FactorFamily::norm; }

  std::string descriptor() const override {
    return "norm:" + (std::isinf(r_) ? std::string("inf") : format_number(r_)) + ":" +
           format_number(gamma());
  }

  double evaluate(const Field& u) const override {
    const Problem& P = problem();
    const double den = lr_norm(P.project(P.apply_N(u)), r_);
    if (!(den > 0.0)) throw DegenerateDenominatorError("||N(u)||_r vanishes");
    return raise(lr_norm(P.project(P.apply_L(u)), r_) / den);
  }

  double directional_derivative(const Field& u, const Field& v) const override {
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    Field base = u;
    if (r_ == 1.0 || std::isinf(r_)) base += kink_offset(u);
    const double eps = 1e-6 * u.norm() / vn;
    return (evaluate(base + eps * v) - evaluate(base - eps * v)) / (2.0 * eps);
  }

 private:
  // Fixed, generic perturbation of size 1e-12 ||u|| that moves u off the
  // measure-zero set where |.| or max(.) is not differentiable.
  static Field kink_offset(const Field& u) {
    Eigen::VectorXcd w(u.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      const double t = 0.6180339887498949 * static_cast<double>(j + 1);
      w[j] = u.is_complex() ? cplx(std::sin(7.0 * t), std::cos(11.0 * t)) : cplx(std::sin(7.0 * t));
    }
    Field f(u.grid(), u.kind(), w);
    return (1e-12 * u.norm() / f.norm()) * f;
  }

  double r_;
};

FactorPtr finish(std::shared_ptr<StabilizingFactor> factor, const FactorOptions& options) {
  if (!options.allow_unstable) factor->check_stability();
  return factor;
}

}  // namespace

FactorPtr petviashvili_factor(double gamma, ProblemPtr problem, FactorOptions options) {
  return finish(std::make_shared<InnerFactor>(HomogeneousMap::identity(), gamma, std::move(problem),
                                              true),
                options);
}

FactorPtr inner_factor(HomogeneousMap f, double gamma, ProblemPtr problem, FactorOptions options) {
  if (!problem) throw ParameterError("factor needs a problem");
  // Probe homogeneity on a smooth bump that is nonzero everywhere.
  const Grid& g = problem->grid();
  Field probe = problem->zero();
  {
    Eigen::VectorXcd w(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j)
      w[j] = 1.0 + 0.5 * std::cos(0.37 * static_cast<double>(j));
    probe = Field(g, problem->kind(), w);
  }
  f.validate_on(probe);
  return finish(std::make_shared<InnerFactor>(std::move(f), gamma, std::move(problem), false),
                options);
}

FactorPtr norm_factor(double r, double gamma, ProblemPtr problem, FactorOptions options) {
  return finish(std::make_shared<NormFactor>(r, gamma, std::move(problem)), options);
}

double optimal_gamma(double p) {
  if (p == 1.0) throw ParameterError("optimal exponent undefined for p = 1");
  return p / (p - 1.0);
}

FactorPtr parse_factor(const std::string& descriptor, ProblemPtr problem, FactorOptions options) {
  if (!problem) throw ParameterError("factor needs a problem");
  const auto parts = split(descriptor, ':');
  const auto exponent = [&](const std::string& text) {
    if (text == "optimal") return optimal_gamma(problem->degree());
    return parse_double(text, "exponent");
  };
  const std::string& family = parts.front();
  if (family == "petviashvili") {
    if (parts.size() != 2) throw ConfigError("factor descriptor: expected petviashvili:<gamma>");
    const double gamma = exponent(parts[1]);
    return petviashvili_factor(gamma, std::move(problem), options);
  }
  if (family == "inner") {
    if (parts.size() != 3 || parts[1].rfind("f=", 0) != 0)
      throw ConfigError("factor descriptor: expected inner:f=<map>:<gamma>");
    const double gamma = exponent(parts[2]);
    return inner_factor(HomogeneousMap::by_name(parts[1].substr(2)), gamma, std::move(problem),
                        options);
  }
  if (family == "norm") {
    if (parts.size() != 3) throw ConfigError("factor descriptor: expected norm:<r>:<gamma>");
    const double r = parts[1] == "inf" ? std::numeric_limits<double>::infinity()
                                       : parse_double(parts[1], "norm exponent r");
    if (!(r >= 1.0)) throw ConfigError("factor descriptor: norm exponent r must be >= 1");
    const double gamma = exponent(parts[2]);
    return norm_factor(r, gamma, std::move(problem), options);
  }
  throw ConfigError("factor descriptor: unknown family '" + family + "'");
}

Eigen::VectorXd factor_gradient(const StabilizingFactor& factor, const Field& u) {
  const Eigen::Index n = u.real_dimension();
  Eigen::VectorXd grad(n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    grad[j] = factor.directional_derivative(u, from_real(u.grid(), u.kind(), e));
    e[j] = 0.0;
  }
  return grad;
}

}  // namespace twave
