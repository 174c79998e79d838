#include <doctest.h>

#include "support.hpp"

using namespace twave;
using namespace twave::testing;

TEST_SUITE("iterate") {
  TEST_CASE("configuration validation") {
    IterationConfig c;
    CHECK_NOTHROW(c.validate());
    c.residual_tolerance = 0.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = IterationConfig{};
    c.divergence_guard = 1.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = IterationConfig{};
    c.max_iterations = -1;
    CHECK_THROWS_AS(c.validate(), ParameterError);
  }

  TEST_CASE("steps at a solution are fixed points") {
    const auto& gs = ground_state();
    const FactorPtr s = petviashvili_factor(1.5, gs.problem);
    CHECK(rel(classical_step(*gs.problem, gs.solution), gs.solution) <= 1e-10);
    const auto [next, value] = stabilized_step(*gs.problem, *s, gs.solution);
    CHECK(rel(next, gs.solution) <= 1e-10);
    CHECK(std::abs(value - 1.0) <= 1e-10);
  }

  TEST_CASE("one-step scaling identity") {
    const auto& gs = ground_state();
    const FactorPtr s = petviashvili_factor(1.5, gs.problem);
    for (double t : {0.5, 2.0, 1.01}) {
      CHECK(rel(stabilized_step(*gs.problem, *s, t * gs.solution).first, gs.solution) <= 1e-10);
      CHECK(rel(classical_step(*gs.problem, t * gs.solution), std::pow(t, 3.0) * gs.solution) <= 1e-12);
    }
    // Non-optimal exponent: s(t u*) = t^q and the output is t^(p+q) u*.
    const FactorPtr s12 = petviashvili_factor(1.2, gs.problem);
    const auto [next, value] = stabilized_step(*gs.problem, *s12, 2.0 * gs.solution);
    CHECK(value == doctest::Approx(std::pow(2.0, s12->degree())).epsilon(1e-10));
    CHECK(rel(next, std::pow(2.0, s12->shifted_eigenvalue()) * gs.solution) <= 1e-10);
  }

  TEST_CASE("classical iteration grows like t^(p^n)") {
    const auto& gs = ground_state();
    Field u = 1.01 * gs.solution;
    for (int n = 1; n <= 4; ++n) {
      u = classical_step(*gs.problem, u);
      const double expected = std::pow(1.01, std::pow(3.0, n));
      CHECK(u.norm() / gs.solution.norm() == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  TEST_CASE("ground state converges with the optimal factor") {
    const auto& gs = ground_state();
    const FactorPtr s = petviashvili_factor(1.5, gs.problem);
    const SolveResult r = solve(*gs.problem, s.get(), gaussian_seed(line_grid(), 1.0, 1.0), IterationConfig{});
    REQUIRE(r.converged());
    CHECK(r.iterations() <= 40);
    CHECK(r.final_residual() <= 5e-12);
    CHECK(r.final_factor_discrepancy() <= 1e-12);
    CHECK(r.trace.first.has_value());
    CHECK(r.trace.last.has_value());
    CHECK(r.trace.history.empty());
    // The last ten residuals decrease monotonically.
    const auto& rec = r.trace.records;
    for (std::size_t i = rec.size() - 10; i < rec.size(); ++i) CHECK(rec[i].residual < rec[i - 1].residual);
    // The even seed never excites the odd eigenvector at 0.7064, so the
    // contraction settles at the largest even eigenvalue of S (0.32731).
    const double ratio = rec[15].residual / rec[14].residual;
    CHECK(ratio == doctest::Approx(0.32731).epsilon(0.05));
  }

  TEST_CASE("history is kept on request") {
    const auto& gs = ground_state();
    const FactorPtr s = petviashvili_factor(1.5, gs.problem);
    IterationConfig c;
    c.keep_history = true;
    c.max_iterations = 5;
    const SolveResult r = solve(*gs.problem, s.get(), gaussian_seed(line_grid(), 1.0, 1.0), c);
    CHECK(r.trace.status == SolveStatus::max_iterations);
    CHECK(r.trace.history.size() == 6);
    CHECK(r.iterations() == 5);
  }

  TEST_CASE("stop rule with the factor discrepancy") {
    const auto& gs = ground_state();
    const FactorPtr s = petviashvili_factor(1.5, gs.problem);
    IterationConfig c;
    c.stop_rule = StopRule::residual_and_factor;
    const SolveResult r = solve(*gs.problem, s.get(), gaussian_seed(line_grid(), 1.0, 1.0), c);
    REQUIRE(r.converged());
    CHECK(r.final_factor_discrepancy() <= c.factor_tolerance);
  }

  TEST_CASE("classical iteration trips the divergence guard") {
    const auto p = soliton();
    const SolveResult r = solve(*p, nullptr, 1.1 * p->exact_profile(), IterationConfig{});
    CHECK(r.trace.status == SolveStatus::diverged);
    CHECK(r.iterations() <= 20);
    CHECK(std::isnan(r.trace.records.front().factor_discrepancy));
  }

  TEST_CASE("soliton from a gauge-perturbed seed") {
    const auto p = soliton();
    const Field u = p->exact_profile();
    const FactorPtr s = petviashvili_factor(1.5, p);
    // Roundoff floor of the residual on this grid is about 1.4e-13.
    const SolveResult r = solve(*p, s.get(), u + 0.2 * u.times_i(), IterationConfig{});
    REQUIRE(r.converged());
    CHECK(r.final_factor_discrepancy() <= 1e-13);
  }

  TEST_CASE("invalid seeds") {
    const auto& gs = ground_state();
    const FactorPtr s = petviashvili_factor(1.5, gs.problem);
    CHECK_THROWS_AS(solve(*gs.problem, s.get(), gs.problem->zero(), IterationConfig{}), ParameterError);
    CHECK_THROWS_AS(solve(*gs.problem, s.get(), gaussian_seed(Grid1D(10.0, 64), 1.0, 1.0), IterationConfig{}),
                    ParameterError);
  }

  TEST_CASE("residual of trivial and exact states") {
    const auto& gs = ground_state();
    CHECK(residual(*gs.problem, gs.problem->zero()) == 0.0);
    CHECK(residual(*gs.problem, gs.solution) <= 1e-10);
  }

  TEST_CASE("factor breakdown is reported as divergence") {
    const ProblemPtr p = std::make_shared<HadamardPowerProblem>(Eigen::MatrixXd::Identity(2, 2), 2);
    const FactorPtr s = petviashvili_factor(2.0, p);
    const Field u = Field::real(p->grid(), (Eigen::VectorXd(2) << 1.0, -1.0).finished());
    const SolveResult r = solve(*p, s.get(), u, IterationConfig{});
    CHECK(r.trace.status == SolveStatus::diverged);
    CHECK(r.trace.message.find("factor") != std::string::npos);
  }

  TEST_CASE("newton from a converged state") {
    const auto& gs = ground_state();
    IterationConfig c;
    c.residual_tolerance = 1e-13;
    const SolveResult r = newton_solve(*gs.problem, gs.solution, c);
    REQUIRE(r.converged());
    CHECK(r.iterations() <= 2);
  }

  TEST_CASE("newton recovers a soliton orbit element") {
    const auto p = soliton();
    const Field u = p->exact_profile();
    IterationConfig c;
    c.max_iterations = 40;
    c.residual_tolerance = 1e-11;
    const SolveResult r = newton_solve(*p, u + 0.05 * u.times_i() + 0.05 * derivative(u, 1), c);
    REQUIRE(r.converged());
    const OrbitFit fit = orbit_match(r.solution, p->parameters());
    CHECK(fit.modulus_distance <= 1e-8);
    // Quadratic tail: the last step shrinks the residual by far more than a linear rate would.
    const auto& rec = r.trace.records;
    REQUIRE(rec.size() >= 3);
    CHECK(rec[rec.size() - 1].residual <= 1e-2 * rec[rec.size() - 2].residual);
  }

  TEST_CASE("petviashvili fails on the antisymmetric double-well state") {
    const Grid1D g = line_grid();
    const auto p = nls_ground_state(double_well_potential(g, 6.0, 1.0), 1.43, g, CubicSign::defocusing);
    IterationConfig c;
    c.max_iterations = 60;
    const Field seed = gaussian_seed(g, 2.0, 2.0, true);
    const SolveResult ref = newton_solve(*p, seed, c);
    REQUIRE(ref.converged());
    const FactorPtr s = petviashvili_factor(1.5, p);
    const SolveResult r = solve(*p, s.get(), seed, IterationConfig{});
    const bool reached = r.converged() && (r.solution - ref.solution).max_abs() <= 1e-6;
    CHECK_FALSE(reached);
  }
}
