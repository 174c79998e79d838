#include "twave/commands.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "twave/errors.hpp"

namespace twave {

namespace fs = std::filesystem;

double mean_value(const Field& u) { return std::abs(u.values().mean()); }

double z_reflection_defect(const Field& u) {
  const Grid& g = u.grid();
  if (g.dimension() != 2) throw ParameterError("z reflection needs a 2D field");
  const int mx = g.axis(0).points();
  const int mz = g.axis(1).points();
  const double scale = u.values().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return 0.0;
  double worst = 0.0;
  for (int ix = 0; ix < mx; ++ix)
    for (int iz = 0; iz < mz; ++iz) {
      const int mirror = (mz - iz) % mz;  // node -l + j h reflects to index m - j
      worst = std::max(worst, std::abs(u[ix * mz + iz] - u[ix * mz + mirror]));
    }
  return worst / scale;
}

SolveResult solve_with(const RunConfig& config, const Problem& problem,
                       const StabilizingFactor* factor, const Field& seed) {
  if (config.solver == "newton") return newton_solve(problem, seed, config.iteration);
  return solve(problem, factor, seed, config.iteration);
}

namespace {

Json grid_json(const Grid& g) {
  Json out{{"half_length", g.axis(0).half_length()}, {"points", g.axis(0).points()}};
  if (g.dimension() == 2) {
    out["half_length_z"] = g.axis(1).half_length();
    out["points_z"] = g.axis(1).points();
  }
  return out;
}

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// Writes trace.csv, profile.csv (plus cross sections in 2D) and summary.json.
Json write_solve_outputs(const fs::path& dir, const RunConfig& config, const Problem& problem,
                         const StabilizingFactor* factor, const SolveResult& result,
                         const std::string& descriptor) {
  write_text(dir / "trace.csv", trace_csv(result.trace));
  write_text(dir / "profile.csv", profile_csv(result.solution));
  if (result.solution.grid().dimension() == 2) {
    const auto [xs, zs] = cross_sections_csv(result.solution);
    write_text(dir / "profile_x.csv", xs);
    write_text(dir / "profile_z.csv", zs);
  }

  Json s;
  s["status"] = to_string(result.trace.status);
  s["message"] = result.trace.message;
  s["iterations"] = result.iterations();
  s["final_residual"] = nullable(result.final_residual());
  double discrepancy = result.final_factor_discrepancy();
  if (factor && !std::isfinite(discrepancy)) {
    try {
      discrepancy = std::abs(factor->evaluate(result.solution) - 1.0);
    } catch (const Error&) {
      discrepancy = std::numeric_limits<double>::quiet_NaN();
    }
  }
  s["final_factor_discrepancy"] = nullable(discrepancy);
  s["final_norm"] = nullable(result.trace.records.back().norm);
  s["solver"] = config.solver;
  s["factor"] = descriptor;
  s["p"] = problem.degree();
  s["gamma"] = factor ? Json(factor->gamma()) : Json(nullptr);
  s["q"] = factor ? Json(factor->degree()) : Json(nullptr);
  s["problem"] = problem.name();
  s["grid"] = grid_json(problem.grid());
  s["iteration"] = to_json(config.iteration);
  if (problem.grid().dimension() == 2) {
    s["zero_mode"] = mean_value(result.solution);
    s["z_reflection_defect"] = z_reflection_defect(result.solution);
  }
  s["config"] = config.source;
  write_json(dir / "summary.json", s);
  return s;
}

fs::path resolve_out(const RunConfig& config, const fs::path& out) {
  return out.empty() ? fs::path(config.output_dir) : out;
}

Json truncated(const SpectrumReport& r, int k) {
  SpectrumReport t = r;
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(k), r.eigenvalues.size());
  t.eigenvalues.resize(n);
  t.residuals.resize(n);
  t.unit_cluster.resize(n);
  return to_json(t);
}

std::string symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::gauge:
      return "gauge";
    case Symmetry::translation_x:
      return "translation_x";
    case Symmetry::translation_z:
      return "translation_z";
  }
  return "unknown";
}

double relative(const Field& a, const Field& b) {
  const double scale = b.norm();
  return scale > 0.0 ? (a - b).norm() / scale : (a - b).norm();
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

}  // namespace

Json cmd_solve(const RunConfig& config, const fs::path& out) {
  const fs::path dir = resolve_out(config, out);
  const ProblemPtr problem = make_problem(config.problem);
  const FactorPtr factor = make_factor(config, problem);
  const Field seed = make_seed(config, *problem);
  const SolveResult result = solve_with(config, *problem, factor.get(), seed);
  return write_solve_outputs(dir, config, *problem, factor.get(), result, config.factor);
}

Json cmd_spectrum(const RunConfig& config, const fs::path& out) {
  const fs::path dir = resolve_out(config, out);
  const ProblemPtr problem = make_problem(config.problem);
  FactorPtr factor = make_factor(config, problem);
  std::string factor_note;
  if (!factor) {
    factor = parse_factor("petviashvili:optimal", problem);
    factor_note = "no factor configured; F' uses petviashvili:optimal";
  }
  const Field seed = make_seed(config, *problem);

  const std::string& at = config.spectrum.at;
  Field state = seed;
  std::optional<Eigen::VectorXd> seed_error;
  if (at == "solution") {
    const SolveResult r = solve_with(config, *problem, factor.get(), seed);
    write_solve_outputs(dir, config, *problem, factor.get(), r, factor->descriptor());
    if (!r.converged())
      throw Error("solve did not converge (" + to_string(r.trace.status) + "): " + r.trace.message);
    state = r.solution;
    seed_error = realify(seed - state);
  } else if (at == "exact") {
    const auto* sol = dynamic_cast<const SolitonProblem*>(problem.get());
    if (!sol) throw ConfigError("spectrum.at: exact needs the soliton family");
    state = sol->exact_profile();
  } else if (at == "file") {
    state = read_profile_csv(config.spectrum.path, problem->grid(), problem->kind());
  }
  state = problem->project(state);

  const Eigen::Index dim = realify(state).size();
  const int k = config.spectrum.k;
  const double p = problem->degree();
  const SpectrumReport spec_s =
      top_eigenvalues(iteration_matrix_operator(*problem, state), dim, k + 2, config.spectrum.method);
  const SpectrumReport spec_f = top_eigenvalues(jacobian_F_operator(*problem, *factor, state), dim,
                                                k, config.spectrum.method);

  Json js = truncated(spec_s, k);
  js["state"] = at;
  js["p"] = p;
  write_json(dir / "spectrum_S.json", js);
  Json jf = to_json(spec_f);
  jf["state"] = at;
  jf["factor"] = factor->descriptor();
  jf["p_plus_q"] = factor->shifted_eigenvalue();
  if (!factor_note.empty()) jf["note"] = factor_note;
  write_json(dir / "spectrum_F.json", jf);

  Json rep;
  rep["state"] = at;
  rep["residual_at_state"] = residual(*problem, state);
  rep["hypotheses"] = to_json(check_hypotheses(spec_s, p, seed_error));
  rep["shift_check"] =
      to_json(spectrum_shift_check(spec_s, spec_f, p, factor->degree()));
  Json rel;
  rel["dominant"] = relative(iteration_matrix_action(*problem, state, state), p * state);
  Json gens = Json::array();
  const auto syms = problem->symmetries();
  const auto fields = symmetry_generators(*problem, state);
  for (std::size_t i = 0; i < fields.size(); ++i)
    gens.push_back({{"symmetry", symmetry_name(syms[i])},
                    {"relative_residual",
                     relative(iteration_matrix_action(*problem, state, fields[i]), fields[i])}});
  rel["generators"] = gens;
  rep["eigenrelations"] = rel;
  write_json(dir / "hypothesis_report.json", rep);
  return rep;
}

Json cmd_continue(const RunConfig& config, const fs::path& out) {
  if (!config.continuation) throw ConfigError("continuation: block required for 'continue'");
  const ContinuationSpec& spec = *config.continuation;
  const fs::path dir = resolve_out(config, out);

  HomotopyPath path;
  path.parameter = spec.parameter;
  path.values = spec.values;
  path.config = config.iteration;
  path.max_bisections = spec.max_bisections;
  const ProblemFamily family = [&](double v) {
    return make_problem(config.problem, spec.parameter, v);
  };
  const FactorBuilder builder = [&](const ProblemPtr& p) { return make_factor(config, p); };
  const Field seed = make_seed(config, *family(spec.values.front()));
  const ContinuationResult result = continue_solve(family, path, seed, builder);

  Json stages = Json::array();
  for (std::size_t i = 0; i < result.stages.size(); ++i) {
    const StageResult& st = result.stages[i];
    char name[32];
    std::snprintf(name, sizeof(name), "stage_%02zu", i);
    const ProblemPtr problem = family(st.parameter);
    const FactorPtr factor = make_factor(config, problem);
    Json s = write_solve_outputs(dir / name, config, *problem, factor.get(), st.result, config.factor);
    Json entry{{"directory", name},
               {"parameter", st.parameter},
               {"inserted", st.inserted},
               {"status", s["status"]},
               {"iterations", s["iterations"]},
               {"final_residual", s["final_residual"]}};
    if (s.contains("zero_mode")) {
      entry["zero_mode"] = s["zero_mode"];
      entry["z_reflection_defect"] = s["z_reflection_defect"];
      entry["max_abs"] = st.result.solution.max_abs();
    }
    stages.push_back(entry);
  }
  Json report{{"parameter", spec.parameter},
              {"completed", result.completed},
              {"message", result.message},
              {"stages", stages}};

  if (spec.compare && !result.stages.empty()) {
    const double at = spec.compare->at;
    const bool up = spec.values.size() < 2 || spec.values.back() > spec.values.front();
    // Warm start: the last converged stage strictly before `at` along the path.
    const StageResult* start = nullptr;
    for (const auto& st : result.stages) {
      const bool before = up ? st.parameter < at : st.parameter > at;
      if (before && st.result.converged()) start = &st;
    }
    if (!start) start = &result.stages.front();
    const ProblemPtr problem = family(at);
    Json runs = Json::array();
    for (const std::string& d : spec.compare->factors) {
      const FactorPtr factor = make_factor(d, config.allow_unstable, problem);
      const SolveResult r = solve(*problem, factor.get(), start->result.solution, config.iteration);
      Json s = write_solve_outputs(dir / "compare" / sanitize(d), config, *problem, factor.get(), r, d);
      runs.push_back({{"factor", d},
                      {"directory", (fs::path("compare") / sanitize(d)).string()},
                      {"status", s["status"]},
                      {"iterations", s["iterations"]},
                      {"final_residual", s["final_residual"]}});
    }
    report["comparison"] = {{"at", at}, {"warm_start_parameter", start->parameter}, {"runs", runs}};
  }
  write_json(dir / "continuation.json", report);
  return report;
}

Json cmd_orbital(const RunConfig& config, const fs::path& out) {
  if (config.problem.family != "soliton")
    throw ConfigError("problem.family: orbital runs need the soliton family");
  const fs::path dir = resolve_out(config, out);
  const ProblemPtr problem = make_problem(config.problem);
  const auto& sol = dynamic_cast<const SolitonProblem&>(*problem);
  const FactorPtr factor = make_factor(config, problem);
  auto perturbations = config.perturbations;
  if (perturbations.empty()) perturbations.emplace_back(config.seed.eps1, config.seed.eps2);

  Json runs = Json::array();
  for (std::size_t i = 0; i < perturbations.size(); ++i) {
    const auto [e1, e2] = perturbations[i];
    const Field u = sol.exact_profile();
    const Field seed = u + e1 * u.times_i() + e2 * derivative(u, 1);
    const SolveResult r = solve_with(config, *problem, factor.get(), seed);
    char name[32];
    std::snprintf(name, sizeof(name), "run_%02zu", i);
    Json s = write_solve_outputs(dir / name, config, *problem, factor.get(), r, config.factor);
    Json entry{{"eps1", e1},
               {"eps2", e2},
               {"directory", name},
               {"status", s["status"]},
               {"iterations", s["iterations"]},
               {"final_residual", s["final_residual"]}};
    entry["fit"] = to_json(orbit_match(r.solution, sol.parameters()));
    runs.push_back(entry);
  }
  const SolitonParameters& prm = sol.parameters();
  Json report{{"lambda1", prm.lambda1},
              {"lambda2", prm.lambda2},
              {"sigma", prm.sigma},
              {"expected_slope", 0.5 * prm.lambda2},
              {"runs", runs}};
  write_json(dir / "orbitfit.json", report);
  return report;
}

int run_command(const std::string& command, const std::function<RunConfig()>& load,
                const fs::path& out, std::ostream& log, std::ostream& err) {
  try {
    const RunConfig config = load();
    const fs::path dir = resolve_out(config, out);
    Json report;
    if (command == "solve") {
      report = cmd_solve(config, dir);
      log << "status " << report["status"].get<std::string>() << ", iterations "
          << report["iterations"].get<int>() << ", residual " << format_float(report["final_residual"].is_null() ? std::nan("") : report["final_residual"].get<double>())
          << '\n';
    } else if (command == "spectrum") {
      report = cmd_spectrum(config, dir);
      for (const auto& v : report["hypotheses"]["verdicts"]) log << v.get<std::string>() << '\n';
    } else if (command == "continue") {
      report = cmd_continue(config, dir);
      log << "stages " << report["stages"].size() << ", completed "
          << (report["completed"].get<bool>() ? "yes" : "no") << '\n';
    } else if (command == "orbital") {
      report = cmd_orbital(config, dir);
      log << "runs " << report["runs"].size() << '\n';
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    log << "outputs in " << dir.string() << '\n';
    return kExitSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
}

}  // namespace twave
