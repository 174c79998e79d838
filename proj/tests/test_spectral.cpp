#include <doctest.h>

#include "support.hpp"

using namespace twave;
using std::numbers::pi;

TEST_SUITE("spectral") {
  TEST_CASE("wavenumbers in native order") {
    const auto k = wavenumbers(Grid1D(pi, 4));
    REQUIRE(k.size() == 4);
    CHECK(k[0] == doctest::Approx(0.0));
    CHECK(k[1] == doctest::Approx(1.0));
    CHECK(k[2] == doctest::Approx(-2.0));
    CHECK(k[3] == doctest::Approx(-1.0));
    const auto k2 = wavenumbers(Grid1D(1.0, 2));
    CHECK(k2[1] == doctest::Approx(-pi));
    const auto k3 = wavenumbers(Grid1D(50.0, 512));
    double kmax = 0.0;
    for (double v : k3) kmax = std::max(kmax, std::abs(v));
    CHECK(kmax == doctest::Approx(pi * 256 / 50).epsilon(1e-14));
  }

  TEST_CASE("grid nodes and sizes") {
    const Grid1D g(pi, 8);
    CHECK(g.node(0) == doctest::Approx(-pi));
    CHECK(g.spacing() == doctest::Approx(pi / 4));
    const Grid plane(Grid2D{Grid1D(1.0, 4), Grid1D(2.0, 6)});
    CHECK(plane.size() == 24);
    CHECK(plane.dimension() == 2);
  }

  TEST_CASE("transform round trip") {
    const Grid grid(Grid2D{Grid1D(3.0, 8), Grid1D(2.0, 6)});
    Eigen::VectorXcd v(48);
    for (int j = 0; j < 48; ++j) v[j] = cplx(std::sin(0.3 * j), std::cos(1.7 * j));
    const Eigen::VectorXcd back = inverse_transform(grid, forward_transform(grid, v));
    CHECK((back - v).norm() <= 1e-13 * v.norm());
  }

  TEST_CASE("derivative of a constant vanishes") {
    const Grid1D g(pi, 16);
    const Field c = sample_real(g, [](double) { return 2.5; });
    for (int order = 1; order <= 3; ++order) CHECK(derivative(c, order).max_abs() <= 1e-14);
  }

  TEST_CASE("derivative of sin is cos") {
    const Grid1D g(pi, 32);
    const Field d = derivative(sample_real(g, [](double x) { return std::sin(x); }), 1);
    const Field c = sample_real(g, [](double x) { return std::cos(x); });
    CHECK((d - c).max_abs() <= 1e-12);
  }

  TEST_CASE("second derivative of sech") {
    const Grid1D g(50.0, 512);
    const auto sech = [](double x) { return 1.0 / std::cosh(x); };
    const Field d2 = derivative(sample_real(g, sech), 2);
    const Field exact = sample_real(g, [&](double x) { return sech(x) - 2.0 * std::pow(sech(x), 3); });
    CHECK((d2 - exact).max_abs() <= 1e-8);
  }

  TEST_CASE("hilbert transform maps cos to sin and kills constants") {
    const Grid1D g(pi, 32);
    const Field h = hilbert_transform(sample_real(g, [](double x) { return std::cos(x); }));
    CHECK((h - sample_real(g, [](double x) { return std::sin(x); })).max_abs() <= 1e-12);
    CHECK(hilbert_transform(sample_real(g, [](double) { return 1.0; })).max_abs() <= 1e-15);
  }

  TEST_CASE("differentiation matrices") {
    const Grid1D g(pi, 16);
    const Eigen::MatrixXd d1 = diff_matrix(g, 1);
    const Eigen::MatrixXd d2 = diff_matrix(g, 2);
    CHECK((d1 * Eigen::VectorXd::Ones(16)).norm() <= 1e-12);
    CHECK(d2.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-11);
    Eigen::VectorXd s(16), c(16);
    for (int j = 0; j < 16; ++j) {
      s[j] = std::sin(g.node(j));
      c[j] = std::cos(g.node(j));
    }
    CHECK((d1 * s - c).cwiseAbs().maxCoeff() <= 1e-12);
    // Agreement with the FFT path on a generic smooth periodic function.
    Eigen::VectorXd f(16);
    for (int j = 0; j < 16; ++j) f[j] = std::exp(std::sin(g.node(j)));
    const Field ff = Field::real(g, f);
    CHECK((d2 * f - realify(derivative(ff, 2))).cwiseAbs().maxCoeff() <= 1e-10);
  }

  TEST_CASE("2D derivative along z") {
    const Grid2D g{Grid1D(pi, 16), Grid1D(pi, 8)};
    const Field u = sample_real(g, [](double x, double z) { return std::cos(x) * std::sin(2 * z); });
    const Field dz = derivative(u, 1, 1);
    const Field exact = sample_real(g, [](double x, double z) { return 2 * std::cos(x) * std::cos(2 * z); });
    CHECK((dz - exact).max_abs() <= 1e-12);
  }

  TEST_CASE("inner products and norms") {
    const Grid1D g(1.0, 2);
    Eigen::VectorXcd a(2), b(2);
    a << cplx(1, 1), cplx(0, 2);
    b << cplx(2, 0), cplx(1, 1);
    const Field fa(g, ScalarKind::complex, a), fb(g, ScalarKind::complex, b);
    // Re(conj(1+i) 2 + conj(2i)(1+i)) = 2 + 2
    CHECK(inner(fa, fb) == doctest::Approx(4.0));
    CHECK(inner(fa, fb) == doctest::Approx(realify(fa).dot(realify(fb))));
    CHECK(lr_norm(fa, 1.0) == doctest::Approx(std::sqrt(2.0) + 2.0));
    CHECK(lr_norm(fa, std::numeric_limits<double>::infinity()) == doctest::Approx(2.0));
    const Field back = from_real(g, ScalarKind::complex, realify(fa));
    CHECK((back - fa).norm() == 0.0);
  }
}
