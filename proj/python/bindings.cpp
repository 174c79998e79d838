#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twave/commands.hpp"
#include "twave/errors.hpp"

namespace py = pybind11;

namespace {

twave::RunConfig parse(const std::string& text) {
  twave::Json doc;
  try {
    doc = twave::Json::parse(text);
  } catch (const twave::Json::parse_error& e) {
    throw twave::ConfigError(std::string("config: ") + e.what());
  }
  return twave::parse_run_config(doc);
}

std::vector<double> column(const twave::IterationTrace& t, double twave::IterationRecord::*field) {
  std::vector<double> out;
  for (const auto& r : t.records) out.push_back(r.*field);
  return out;
}

py::dict solve_config(const std::string& text) {
  const twave::RunConfig config = parse(text);
  const twave::ProblemPtr problem = twave::make_problem(config.problem);
  const twave::FactorPtr factor = twave::make_factor(config, problem);
  const twave::Field seed = twave::make_seed(config, *problem);
  const twave::SolveResult r = [&] {
    py::gil_scoped_release release;
    return twave::solve_with(config, *problem, factor.get(), seed);
  }();
  py::dict d;
  d["status"] = twave::to_string(r.trace.status);
  d["message"] = r.trace.message;
  d["iterations"] = r.iterations();
  d["residual"] = column(r.trace, &twave::IterationRecord::residual);
  d["factor_discrepancy"] = column(r.trace, &twave::IterationRecord::factor_discrepancy);
  d["norm"] = column(r.trace, &twave::IterationRecord::norm);
  d["solution"] = Eigen::VectorXcd(r.solution.values());
  d["x"] = problem->grid().axis(0).nodes();
  if (problem->grid().dimension() == 2) d["z"] = problem->grid().axis(1).nodes();
  return d;
}

py::dict spectrum_config(const std::string& text) {
  const twave::RunConfig config = parse(text);
  const twave::ProblemPtr problem = twave::make_problem(config.problem);
  twave::FactorPtr factor = twave::make_factor(config, problem);
  if (!factor) factor = twave::parse_factor("petviashvili:optimal", problem);
  twave::Field state = twave::make_seed(config, *problem);
  py::gil_scoped_release release;
  if (config.spectrum.at == "solution") {
    const twave::SolveResult r = twave::solve_with(config, *problem, factor.get(), state);
    if (!r.converged()) throw twave::Error("solve did not converge: " + r.trace.message);
    state = r.solution;
  } else if (config.spectrum.at == "exact") {
    const auto* sol = dynamic_cast<const twave::SolitonProblem*>(problem.get());
    if (!sol) throw twave::ConfigError("spectrum.at: exact needs the soliton family");
    state = sol->exact_profile();
  } else if (config.spectrum.at == "file") {
    state = twave::read_profile_csv(config.spectrum.path, problem->grid(), problem->kind());
  }
  const Eigen::Index dim = state.real_dimension();
  const int k = config.spectrum.k;
  const auto s = twave::top_eigenvalues(twave::iteration_matrix_operator(*problem, state), dim,
                                        k + 2, config.spectrum.method);
  const auto f = twave::top_eigenvalues(twave::jacobian_F_operator(*problem, *factor, state), dim,
                                        k, config.spectrum.method);
  const auto hyp = twave::check_hypotheses(s, problem->degree());
  const auto shift = twave::spectrum_shift_check(s, f, problem->degree(), factor->degree());
  py::gil_scoped_acquire acquire;
  py::dict d;
  d["S"] = std::vector<twave::cplx>(s.eigenvalues.begin(),
                                    s.eigenvalues.begin() + std::min<std::size_t>(k, s.eigenvalues.size()));
  d["F"] = f.eigenvalues;
  d["verdicts"] = hyp.verdicts;
  d["shift_check_passed"] = shift.passed;
  d["method"] = s.method;
  return d;
}

int run_text(const std::string& command, const std::string& text, const std::string& out) {
  std::ostringstream log, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = twave::run_command(command, [&] { return parse(text); }, out, log, err);
  }
  if (!err.str().empty()) py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
  return code;
}

}  // namespace

PYBIND11_MODULE(_twave, m) {
  m.doc() = "Stabilized fixed-point solvers for solitary-wave profiles";
  // Translators run newest first, so the subclass is registered last.
  py::register_exception<twave::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<twave::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("optimal_gamma", &twave::optimal_gamma, py::arg("p"),
        "Exponent that moves the dominant eigenvalue p to zero.");
  m.def("recipe_names", [] {
    std::vector<std::string> names;
    for (const auto& [name, text] : twave::builtin_recipes()) names.push_back(name);
    return names;
  });
  m.def("recipe", [](const std::string& name) {
    const auto& all = twave::builtin_recipes();
    const auto it = all.find(name);
    if (it == all.end()) throw twave::ConfigError("unknown recipe '" + name + "'");
    return it->second;
  }, py::arg("name"), "JSON text of a built-in recipe.");
  m.def("solve", &solve_config, py::arg("config_json"),
        "Solves the configured problem; returns the trace and the profile.");
  m.def("spectrum", &spectrum_config, py::arg("config_json"),
        "Largest-modulus eigenvalues of the iteration matrix and the stabilized Jacobian.");
  m.def("run", &run_text, py::arg("command"), py::arg("config_json"), py::arg("out"),
        "Runs a command-line command and returns its exit code.");
  m.def("exact_soliton",
        [](double sigma, double lambda1, double lambda2, double half_length, int points) {
          twave::SolitonParameters p;
          p.sigma = sigma;
          p.lambda1 = lambda1;
          p.lambda2 = lambda2;
          return Eigen::VectorXcd(
              twave::exact_soliton_profile(p, twave::Grid1D(half_length, points)).values());
        },
        py::arg("sigma") = 1.0, py::arg("lambda1") = 1.0, py::arg("lambda2") = 1.0,
        py::arg("half_length") = 50.0, py::arg("points") = 512);
}
