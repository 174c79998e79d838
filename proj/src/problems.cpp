#include "twave/problems.hpp"

#include <cmath>

#include "twave/errors.hpp"

namespace twave {

Problem::Problem(Grid grid, ScalarKind kind, double degree)
    : grid_(std::move(grid)), kind_(kind), degree_(degree) {
  if (!(std::abs(degree) > 1.0)) throw ParameterError("homogeneity degree must satisfy |p| > 1");
}

Field Problem::jacobian_N(const Field&, const Field&) const {
  throw Error("problem '" + name() + "' does not provide the Jacobian of N");
}

namespace {

constexpr double kSingularRcond = 1e-13;

void check_field(const Problem& problem, const Field& f) {
  if (!(f.grid() == problem.grid())) throw ParameterError("field grid does not match the problem");
}

Eigen::VectorXd node_values(const Field& f) { return f.values().real(); }

}  // namespace

// ---------------------------------------------------------------------------
// Ground states

GroundStateProblem::GroundStateProblem(const Grid1D& grid, Eigen::VectorXd potential, double mu,
                                       CubicSign sign)
    : Problem(grid, ScalarKind::real, 3.0), potential_(std::move(potential)), mu_(mu), sign_(sign) {
  if (potential_.size() != grid.points())
    throw ParameterError("potential must be sampled at every grid node");
  matrix_ = diff_matrix(grid, 2);
  matrix_.diagonal() += potential_;
  matrix_.diagonal().array() -= mu_;
  lu_.compute(matrix_);
  const double rc = lu_.rcond();
  if (!(rc > kSingularRcond))
    throw SingularOperatorError("L = D^2 + diag(V) - mu I is singular (mu is a discrete eigenvalue)");
}

Field GroundStateProblem::apply_L(const Field& u) const {
  check_field(*this, u);
  return Field::real(grid(), matrix_ * node_values(u));
}

Field GroundStateProblem::solve_L(const Field& b) const {
  check_field(*this, b);
  return Field::real(grid(), lu_.solve(node_values(b)));
}

Field GroundStateProblem::apply_N(const Field& u) const {
  check_field(*this, u);
  const Eigen::ArrayXd x = node_values(u).array();
  return Field::real(grid(), (signed_unit() * x.cube()).matrix());
}

Field GroundStateProblem::jacobian_N(const Field& u, const Field& v) const {
  const Eigen::ArrayXd x = node_values(u).array();
  const Eigen::ArrayXd y = node_values(v).array();
  return Field::real(grid(), (3.0 * signed_unit() * x.square() * y).matrix());
}

std::shared_ptr<GroundStateProblem> nls_ground_state(const Eigen::VectorXd& potential, double mu,
                                                     const Grid1D& grid, CubicSign sign) {
  return std::make_shared<GroundStateProblem>(grid, potential, mu, sign);
}

Eigen::VectorXd sech2_potential(const Grid1D& grid, double amplitude) {
  Eigen::VectorXd v(grid.points());
  for (int j = 0; j < grid.points(); ++j) {
    const double s = 1.0 / std::cosh(grid.node(j));
    v[j] = amplitude * s * s;
  }
  return v;
}

Eigen::VectorXd double_well_potential(const Grid1D& grid, double amplitude, double separation) {
  Eigen::VectorXd v(grid.points());
  for (int j = 0; j < grid.points(); ++j) {
    const double a = 1.0 / std::cosh(grid.node(j) - separation);
    const double b = 1.0 / std::cosh(grid.node(j) + separation);
    v[j] = amplitude * (a * a + b * b);
  }
  return v;
}

// ---------------------------------------------------------------------------
// NLS solitons

SolitonProblem::SolitonProblem(const SolitonParameters& params, const Grid1D& grid)
    : Problem(grid, ScalarKind::complex, 2.0 * params.sigma + 1.0), params_(params) {
  if (!(params.sigma > 0.0)) throw ParameterError("soliton requires sigma > 0");
  if (!(params.a() > 0.0)) throw ParameterError("soliton requires a = lambda1 - lambda2^2/4 > 0");
  // The first-derivative part uses the Nyquist-free symbol, like every odd derivative.
  const auto k = wavenumbers(grid);
  symbol_.resize(grid.points());
  for (int j = 0; j < grid.points(); ++j) {
    const double kk = k[static_cast<std::size_t>(j)];
    const double k_odd = j == nyquist_index(grid) ? 0.0 : kk;
    symbol_[j] = -kk * kk - params.lambda1 + params.lambda2 * k_odd;
  }
}

Field SolitonProblem::apply_L(const Field& u) const {
  check_field(*this, u);
  return apply_symbol(Field(grid(), ScalarKind::complex, u.values()), symbol_);
}

Field SolitonProblem::solve_L(const Field& b) const {
  check_field(*this, b);
  return apply_symbol(Field(grid(), ScalarKind::complex, b.values()), symbol_.cwiseInverse());
}

Field SolitonProblem::apply_N(const Field& u) const {
  check_field(*this, u);
  const double sigma = params_.sigma;
  Eigen::VectorXcd out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const cplx z = u[j];
    out[j] = -std::pow(std::abs(z), 2.0 * sigma) * z;
  }
  return Field(grid(), ScalarKind::complex, out);
}

Field SolitonProblem::jacobian_N(const Field& u, const Field& v) const {
  const double sigma = params_.sigma;
  Eigen::VectorXcd out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const cplx z = u[j];
    const double r = std::abs(z);
    const double r2s = std::pow(r, 2.0 * sigma);
    // |U|^{2 sigma - 2} U^2 written as |U|^{2 sigma} (U/|U|)^2 so that U = 0 is harmless.
    const cplx phase2 = r > 0.0 ? (z / r) * (z / r) : cplx(0.0);
    out[j] = -(sigma + 1.0) * r2s * v[j] - sigma * r2s * phase2 * std::conj(v[j]);
  }
  return Field(grid(), ScalarKind::complex, out);
}

Field SolitonProblem::exact_profile(double x0, double theta0) const {
  SolitonParameters p = params_;
  p.x0 = x0;
  p.theta0 = theta0;
  return exact_soliton_profile(p, grid().axis(0));
}

std::shared_ptr<SolitonProblem> nls_soliton(const SolitonParameters& params, const Grid1D& grid) {
  return std::make_shared<SolitonProblem>(params, grid);
}

Field exact_soliton_profile(const SolitonParameters& params, const Grid1D& grid) {
  const double a = params.a();
  if (!(a > 0.0) || !(params.sigma > 0.0))
    throw ParameterError("soliton requires sigma > 0 and a > 0");
  const double sigma = params.sigma;
  const double amplitude = std::pow(a * (sigma + 1.0), 1.0 / (2.0 * sigma));
  Eigen::VectorXcd v(grid.points());
  for (int j = 0; j < grid.points(); ++j) {
    const double s = grid.node(j) - params.x0;
    const double rho = amplitude * std::pow(1.0 / std::cosh(sigma * std::sqrt(a) * s), 1.0 / sigma);
    const double theta = 0.5 * params.lambda2 * s + params.theta0;
    v[j] = std::polar(rho, theta);
  }
  return Field(grid, ScalarKind::complex, v);
}

// ---------------------------------------------------------------------------
// Benjamin / KP-I lumps

BenjaminLumpProblem::BenjaminLumpProblem(double gamma, double cs, const Grid2D& grid)
    : Problem(grid, ScalarKind::real, 2.0), gamma_(gamma), cs_(cs) {
  if (!(cs > 0.0)) throw ParameterError("lump speed c_s must be positive");
  if (!(gamma >= 0.0)) throw ParameterError("Gamma must be non-negative");
  const auto kx = wavenumbers(grid.x);
  const auto kz = wavenumbers(grid.z);
  const int mx = grid.x.points();
  const int mz = grid.z.points();
  symbol_.resize(static_cast<Eigen::Index>(mx) * mz);
  kx_squared_.resize(symbol_.size());
  for (int ix = 0; ix < mx; ++ix) {
    for (int iz = 0; iz < mz; ++iz) {
      const double a = kx[static_cast<std::size_t>(ix)];
      const double b = kz[static_cast<std::size_t>(iz)];
      symbol_[ix * mz + iz] = symbol_at(a, b, gamma, cs);
      kx_squared_[ix * mz + iz] = a * a;
    }
  }
}

Field BenjaminLumpProblem::apply_L(const Field& u) const {
  check_field(*this, u);
  Eigen::VectorXcd hat = forward_transform(grid(), u.values());
  hat.array() *= symbol_.array().cast<cplx>();
  hat[0] = 0.0;
  return Field(grid(), ScalarKind::real, inverse_transform(grid(), hat));
}

Field BenjaminLumpProblem::solve_L(const Field& b) const {
  check_field(*this, b);
  Eigen::VectorXcd hat = forward_transform(grid(), b.values());
  hat[0] = 0.0;
  for (Eigen::Index j = 1; j < hat.size(); ++j) hat[j] /= symbol_[j];
  return Field(grid(), ScalarKind::real, inverse_transform(grid(), hat));
}

Field BenjaminLumpProblem::nonlinear_transform(const Eigen::VectorXcd& product) const {
  Eigen::VectorXcd hat = forward_transform(grid(), product);
  hat.array() *= kx_squared_.array().cast<cplx>();
  hat[0] = 0.0;
  return Field(grid(), ScalarKind::real, inverse_transform(grid(), hat));
}

Field BenjaminLumpProblem::apply_N(const Field& u) const {
  check_field(*this, u);
  return nonlinear_transform(u.values().array().square().matrix());
}

Field BenjaminLumpProblem::jacobian_N(const Field& u, const Field& v) const {
  return nonlinear_transform((2.0 * u.values().array() * v.values().array()).matrix());
}

Field BenjaminLumpProblem::project(const Field& f) const {
  Eigen::VectorXcd hat = forward_transform(grid(), f.values());
  hat[0] = 0.0;
  return Field(grid(), f.kind(), inverse_transform(grid(), hat));
}

std::shared_ptr<BenjaminLumpProblem> benjamin_lump(double gamma, double cs, const Grid2D& grid) {
  return std::make_shared<BenjaminLumpProblem>(gamma, cs, grid);
}

// ---------------------------------------------------------------------------
// Synthetic dense systems

namespace {
Grid1D index_grid(Eigen::Index n) {
  return Grid1D(0.5 * static_cast<double>(n), static_cast<int>(n));
}
}  // namespace

HadamardPowerProblem::HadamardPowerProblem(Eigen::MatrixXd matrix, int power)
    : Problem(index_grid(matrix.rows()), ScalarKind::real, static_cast<double>(power)),
      matrix_(std::move(matrix)),
      power_(power) {
  if (matrix_.rows() != matrix_.cols()) throw ParameterError("L must be square");
  lu_.compute(matrix_);
  if (!(lu_.rcond() > kSingularRcond)) throw SingularOperatorError("L is singular");
}

Field HadamardPowerProblem::apply_L(const Field& u) const {
  return Field::real(grid(), matrix_ * node_values(u));
}

Field HadamardPowerProblem::solve_L(const Field& b) const {
  return Field::real(grid(), lu_.solve(node_values(b)));
}

Field HadamardPowerProblem::apply_N(const Field& u) const {
  return Field::real(grid(), node_values(u).array().pow(power_).matrix());
}

Field HadamardPowerProblem::jacobian_N(const Field& u, const Field& v) const {
  const Eigen::ArrayXd x = node_values(u).array();
  return Field::real(grid(), (power_ * x.pow(power_ - 1) * node_values(v).array()).matrix());
}

// ---------------------------------------------------------------------------

Field gaussian_seed(const Grid& grid, double amplitude, double width, bool antisymmetric) {
  if (amplitude == 0.0) throw ParameterError("seed amplitude must be nonzero");
  if (!(width > 0.0)) throw ParameterError("seed width must be positive");
  const double w2 = width * width;
  if (grid.dimension() == 1) {
    return sample_real(grid.axis(0), [&](double x) {
      return amplitude * std::exp(-x * x / w2) * (antisymmetric ? x : 1.0);
    });
  }
  return sample_real(Grid2D{grid.axis(0), grid.axis(1)}, [&](double x, double z) {
    return amplitude * std::exp(-(x * x + z * z) / w2) * (antisymmetric ? x : 1.0);
  });
}

}  // namespace twave
