#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace twave;
using namespace twave::testing;
using std::numbers::pi;

namespace {

// Random field with node values bounded away from zero, so that every factor
// family is differentiable there.
Field random_field(const Problem& p, std::mt19937& gen) {
  std::uniform_real_distribution<double> amp(0.7, 1.7), phase(-pi, pi);
  Eigen::VectorXcd v(p.grid().size());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    v[j] = p.kind() == ScalarKind::complex ? std::polar(amp(gen), phase(gen)) : cplx(amp(gen));
  return Field(p.grid(), p.kind(), v);
}

Field random_direction(const Problem& p, std::mt19937& gen) {
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(p.grid().size());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    v[j] = p.kind() == ScalarKind::complex ? cplx(d(gen), d(gen)) : cplx(d(gen));
  return Field(p.grid(), p.kind(), v);
}

std::vector<ProblemPtr> models() {
  const Grid1D g(20.0, 64);
  return {nls_ground_state(sech2_potential(g, 1.0), 1.3, g),
          nls_soliton(SolitonParameters{}, g),
          nls_soliton(SolitonParameters{2.0, 1.0, 1.0, 0.0, 0.0}, g),
          benjamin_lump(0.4, 1.0, Grid2D{Grid1D(8 * pi, 16), Grid1D(8 * pi, 16)}),
          synthetic_problem(10, 5u)};
}

double fd_order(const std::function<double(double)>& err) {
  return std::log10(err(1e-3) / err(1e-4));
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("homogeneity of the nonlinearity") {
    std::mt19937 gen(20240601u);
    std::uniform_real_distribution<double> tdist(0.1, 10.0);
    for (const ProblemPtr& p : models()) {
      for (int trial = 0; trial < 5; ++trial) {
        const Field u = p->project(random_field(*p, gen));
        const double t = tdist(gen);
        const Field rhs = std::pow(t, p->degree()) * p->apply_N(u);
        CHECK((p->apply_N(t * u) - rhs).norm() <= 1e-12 * rhs.norm());
      }
    }
  }

  TEST_CASE("jacobian consistency") {
    std::mt19937 gen(7u);
    for (const ProblemPtr& p : models()) {
      const Field u = p->project(random_field(*p, gen));
      const Field v = p->project(random_direction(*p, gen));
      const Field jv = p->jacobian_N(u, v);
      const auto err = [&](double eps) {
        const Field fd = (1.0 / (2 * eps)) * (p->apply_N(u + eps * v) - p->apply_N(u - eps * v));
        return (fd - jv).norm();
      };
      CHECK(second_order_consistent(err(1e-3), err(1e-4), jv.norm()));
      CHECK(rel(p->jacobian_N(u, u), p->degree() * p->apply_N(u)) <= 1e-10);
    }
  }

  TEST_CASE("linear solve inverts the linear operator") {
    std::mt19937 gen(11u);
    for (const ProblemPtr& p : models()) {
      const Field b = p->project(random_direction(*p, gen));
      CHECK(rel(p->apply_L(p->solve_L(b)), b) <= 1e-10);
    }
  }

  TEST_CASE("factor laws") {
    std::mt19937 gen(99u);
    std::uniform_real_distribution<double> tdist(0.1, 10.0);
    const char* families[] = {"petviashvili:optimal", "inner:f=square:optimal", "norm:1:optimal",
                              "norm:2:optimal", "norm:3.5:optimal", "norm:inf:optimal"};
    for (const ProblemPtr& p : models()) {
      if (p->name() == "benjamin") continue;  // projected fields cross zero
      for (const char* d : families) {
        CAPTURE(d);
        CAPTURE(p->name());
        const FactorPtr s = parse_factor(d, p);
        const Field u = random_field(*p, gen);
        const double su = s->evaluate(u);
        // (P2) s(t u) = t^q s(u)
        for (int trial = 0; trial < 3; ++trial) {
          const double t = tdist(gen);
          CHECK(std::abs(s->evaluate(t * u) - std::pow(t, s->degree()) * su) <=
                1e-10 * std::abs(std::pow(t, s->degree()) * su));
        }
        // Euler identity <grad s(u), u> = q s(u).
        CHECK(std::abs(s->directional_derivative(u, u) - s->degree() * su) <= 1e-6 * std::abs(su));
        // Gradient against central differences.
        const Field v = (u.norm() / std::sqrt(static_cast<double>(u.size()))) * random_direction(*p, gen);
        const double dv = s->directional_derivative(u, v);
        const double order = fd_order([&](double eps) {
          return std::abs(dv - (s->evaluate(u + eps * v) - s->evaluate(u - eps * v)) / (2 * eps));
        });
        CHECK(order >= 1.9);
      }
    }
  }

  TEST_CASE("factor equals one at converged states") {
    const auto& gs = ground_state();
    const auto sol = soliton();
    const Field su = sol->exact_profile();
    for (const char* d : {"petviashvili:optimal", "inner:f=square:optimal", "norm:1:optimal",
                          "norm:2:optimal", "norm:inf:optimal"}) {
      CHECK(std::abs(parse_factor(d, gs.problem)->evaluate(gs.solution) - 1.0) <= 1e-8);
      CHECK(std::abs(parse_factor(d, sol)->evaluate(su) - 1.0) <= 1e-8);
    }
  }
}
