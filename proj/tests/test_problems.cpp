#include <doctest.h>

#include "support.hpp"

using namespace twave;
using namespace twave::testing;
using std::numbers::pi;

namespace {

Field smooth_complex(const Grid1D& g) {
  Eigen::VectorXcd v(g.points());
  for (int j = 0; j < g.points(); ++j) {
    const double x = g.node(j);
    v[j] = cplx(std::exp(-x * x / 4.0), 0.5 * x * std::exp(-x * x / 9.0));
  }
  return Field(g, ScalarKind::complex, v);
}

Field smooth_plane(const Grid2D& g) {
  return sample_real(g, [](double x, double z) {
    return (1.0 - x * x / 4.0) * std::exp(-(x * x + z * z) / 8.0);
  });
}

void check_model(const Problem& p, const Field& u, const Field& v) {
  const Field b = p.project(u);
  CHECK(rel(p.apply_L(p.solve_L(b)), b) <= 1e-10);
  for (double t : {0.3, 2.0, 7.5}) {
    const Field lhs = p.apply_N(t * u);
    const Field rhs = std::pow(t, p.degree()) * p.apply_N(u);
    CHECK(rel(lhs, rhs) <= 1e-12);
  }
  CHECK(rel(p.jacobian_N(u, u), p.degree() * p.apply_N(u)) <= 1e-10);
  // Central differences of N agree with N'(u) v at second order.
  double errs[2];
  const double eps[2] = {1e-3, 1e-4};
  for (int i = 0; i < 2; ++i) {
    const Field fd = (1.0 / (2.0 * eps[i])) * (p.apply_N(u + eps[i] * v) - p.apply_N(u - eps[i] * v));
    errs[i] = (fd - p.jacobian_N(u, v)).norm();
  }
  CHECK(second_order_consistent(errs[0], errs[1], p.jacobian_N(u, v).norm()));
}

}  // namespace

TEST_SUITE("problems") {
  TEST_CASE("ground state operators") {
    const Grid1D g = line_grid();
    const auto p = nls_ground_state(sech2_potential(g, 1.0), 1.3, g);
    CHECK(p->degree() == 3.0);
    const Field u = gaussian_seed(g, 1.0, 2.0);
    const Field v = gaussian_seed(g, 0.5, 3.0, true);
    check_model(*p, u, v);
    // Focusing sign: N(U) = -U^3.
    CHECK(p->apply_N(u)[256].real() == doctest::Approx(-1.0));
    CHECK(p->symmetries().empty());
  }

  TEST_CASE("zero field solves the free problem") {
    const Grid1D g = line_grid();
    const auto p = nls_ground_state(Eigen::VectorXd::Zero(512), 1.0, g);
    CHECK(residual(*p, p->zero()) == 0.0);
  }

  TEST_CASE("singular operator is rejected") {
    // With V = 0, L = D^2 - mu I is singular when mu = -k^2 for a grid wavenumber.
    const Grid1D g(pi, 8);
    CHECK_THROWS_AS(nls_ground_state(Eigen::VectorXd::Zero(8), -1.0, g), SingularOperatorError);
  }

  TEST_CASE("double well potential") {
    const Grid1D g = line_grid();
    const Eigen::VectorXd v = double_well_potential(g, 6.0, 1.0);
    CHECK(v[256] == doctest::Approx(12.0 / std::pow(std::cosh(1.0), 2)));
    CHECK(v[256 + 10] == doctest::Approx(v[256 - 10]));
  }

  TEST_CASE("soliton operators") {
    const auto p = soliton();
    CHECK(p->degree() == 3.0);
    const Grid1D g = line_grid();
    check_model(*p, smooth_complex(g), gaussian_seed(g, 0.7, 2.0, true).times_i());
    // Symbol -k^2 - lambda1 + lambda2 k has no real zero when a > 0.
    CHECK(p->symbol().cwiseAbs().minCoeff() >= 0.74);
    SolitonParameters bad;
    bad.lambda1 = 0.2;
    CHECK_THROWS_AS(nls_soliton(bad, g), ParameterError);
  }

  TEST_CASE("exact soliton profile") {
    const auto p = soliton();
    const Field u = p->exact_profile();
    CHECK(std::abs(u[256]) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    for (int j = 1; j < 200; ++j) CHECK(std::abs(u[256 + j]) == doctest::Approx(std::abs(u[256 - j])));
    CHECK(residual(*p, u) <= 1e-8);
    // The profile is an orbit element: shifted copies are also solutions.
    CHECK(residual(*p, p->exact_profile(1.5, 0.7)) <= 1e-8);
  }

  TEST_CASE("benjamin lump operators") {
    const Grid2D g{Grid1D(8 * pi, 32), Grid1D(8 * pi, 32)};
    const auto p = benjamin_lump(0.5, 1.0, g);
    CHECK(p->degree() == 2.0);
    CHECK(BenjaminLumpProblem::symbol_at(1.0, 0.0, 0.5, 1.0) == doctest::Approx(3.0));
    CHECK(BenjaminLumpProblem::symbol_at(0.0, 2.0, 0.5, 1.0) == doctest::Approx(4.0));
    const Field u = p->project(smooth_plane(g));
    check_model(*p, u, p->project(sample_real(g, [](double x, double z) {
                  return std::sin(x / 4) * std::exp(-z * z / 20);
                })));
    // N has no content on kx = 0 modes: every x-line of N(u) has zero mean.
    const Field n = p->apply_N(u);
    for (int iz = 0; iz < 32; ++iz) {
      cplx mean = 0;
      for (int ix = 0; ix < 32; ++ix) mean += n[ix * 32 + iz];
      CHECK(std::abs(mean) <= 1e-12);
    }
    CHECK(std::abs(forward_transform(g, p->solve_L(n).values())[0]) <= 1e-12);
  }

  TEST_CASE("gaussian seeds") {
    const Grid1D g = line_grid();
    CHECK(gaussian_seed(g, 1.0, 1.0)[256].real() == doctest::Approx(1.0));
    const Field odd = gaussian_seed(g, 1.0, 2.0, true);
    for (int j = 1; j < 256; ++j) CHECK(odd[256 + j].real() == doctest::Approx(-odd[256 - j].real()));
    const Grid2D plane{Grid1D(8 * pi, 16), Grid1D(8 * pi, 16)};
    const auto p = benjamin_lump(0.0, 1.0, plane);
    const Field s = p->project(gaussian_seed(plane, 2.0, 2.0));
    CHECK(std::abs(forward_transform(plane, s.values())[0]) <= 1e-12);
    CHECK_THROWS_AS(gaussian_seed(g, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(gaussian_seed(g, 1.0, 0.0), ParameterError);
  }

  TEST_CASE("synthetic power problem") {
    const auto p = synthetic_problem(6, 7u);
    CHECK(residual(*p, ones(*p)) <= 1e-13);
    check_model(*p, gaussian_seed(p->grid(), 1.0, 2.0), gaussian_seed(p->grid(), 1.0, 1.0, true));
  }
}
