#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

using namespace twave;
namespace fs = std::filesystem;

namespace {

Json ground_state_doc() { return Json::parse(builtin_recipes().at("table1_col12")); }

std::string config_error(const Json& doc) {
  try {
    parse_run_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("twave_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string read(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("built-in recipes match the shipped files") {
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(TWAVE_RECIPE_DIR)) {
      if (entry.path().extension() != ".json") continue;
      ++files;
      const std::string name = entry.path().stem().string();
      REQUIRE(builtin_recipes().count(name) == 1);
      CHECK(builtin_recipes().at(name) == read(entry.path()));
      CHECK_NOTHROW(recipe_config(name));
    }
    CHECK(files == builtin_recipes().size());
    for (const char* name : {"table1_col12", "table1_col34", "table2", "fig2", "fig67"})
      CHECK(builtin_recipes().count(name) == 1);
  }

  TEST_CASE("defaults and pi multiples") {
    const RunConfig c = recipe_config("fig2");
    CHECK(c.problem.family == "benjamin");
    CHECK(c.problem.half_length == doctest::Approx(32 * std::numbers::pi));
    CHECK(c.problem.points_z == 128);
    REQUIRE(c.continuation.has_value());
    CHECK(c.continuation->values.size() == 6);
    const RunConfig g = parse_run_config(Json::parse(R"({"problem": {"family": "ground_state"}})"));
    CHECK(g.problem.half_length == 50.0);
    CHECK(g.problem.points == 512);
    CHECK(g.factor == "petviashvili:optimal");
  }

  TEST_CASE("errors name the offending field") {
    Json d = ground_state_doc();
    d["factor"] = "petviashvili:abc";
    CHECK(config_error(d).find("factor") == 0);
    d = ground_state_doc();
    d["problem"]["grid"]["points"] = 511;
    CHECK(config_error(d).find("problem.grid") == 0);
    d = ground_state_doc();
    d["iteration"]["tolerance"] = 1e-3;
    CHECK(config_error(d) == "iteration.tolerance: unknown key");
    d = ground_state_doc();
    d["seed"]["width"] = "wide";
    CHECK(config_error(d).find("seed.width") == 0);
    d = ground_state_doc();
    d["solver"] = "magic";
    CHECK(config_error(d).find("solver") == 0);
    d = ground_state_doc();
    d.erase("problem");
    CHECK(config_error(d).find("problem") == 0);
    d = ground_state_doc();
    d["seed"] = Json{{"kind", "exact_perturbed"}};
    CHECK(config_error(d).find("seed.kind") == 0);
    d = ground_state_doc();
    d["factor"] = "petviashvili:1";
    CHECK(config_error(d).find("factor") == 0);
    d["allow_unstable"] = true;
    CHECK(config_error(d).empty());
    CHECK_THROWS_AS(recipe_config("nope"), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("continuation parameter overrides") {
    const RunConfig c = recipe_config("fig2");
    const ProblemPtr p = make_problem(c.problem, "Gamma", 0.3);
    CHECK(dynamic_cast<const BenjaminLumpProblem&>(*p).gamma() == 0.3);
    CHECK_THROWS_AS(make_problem(c.problem, "mu", 1.0), ConfigError);
  }

  TEST_CASE("seeds") {
    RunConfig c = recipe_config("fig67");
    c.seed.kind = "exact_perturbed";
    c.seed.eps1 = 0.2;
    c.seed.eps2 = 0.0;
    const ProblemPtr p = make_problem(c.problem);
    const Field u = dynamic_cast<const SolitonProblem&>(*p).exact_profile();
    CHECK((make_seed(c, *p) - (u + 0.2 * u.times_i())).norm() <= 1e-14);
  }

  TEST_CASE("solve command writes deterministic outputs") {
    const RunConfig c = recipe_config("table1_col12");
    const fs::path a = scratch("solve_a"), b = scratch("solve_b");
    const Json s = cmd_solve(c, a);
    cmd_solve(c, b);
    CHECK(s["status"] == "converged");
    CHECK(s["iterations"].get<int>() <= 40);
    CHECK(s["gamma"].get<double>() == 1.5);
    CHECK(s["q"].get<double>() == -3.0);
    CHECK(s["p"].get<double>() == 3.0);
    CHECK(s["factor"] == "petviashvili:optimal");
    CHECK(s["grid"]["points"] == 512);
    CHECK(s["iteration"]["residual_tolerance"].get<double>() == 1e-12);
    for (const char* f : {"trace.csv", "profile.csv", "summary.json"}) CHECK(read(a / f) == read(b / f));
    CHECK(read(a / "trace.csv").rfind("iter,residual,factor_discrepancy,norm\n", 0) == 0);
    CHECK(read(a / "profile.csv").rfind("x,re,im\n", 0) == 0);
    // Floats carry 17 significant digits.
    std::istringstream lines(read(a / "profile.csv"));
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(row.substr(0, row.find(',')) == "-50");
    // The summary echoes the configuration, so it can be re-run as is.
    const RunConfig again = parse_run_config(Json::parse(read(a / "summary.json"))["config"]);
    CHECK(cmd_solve(again, scratch("solve_c"))["final_residual"] == s["final_residual"]);
    // Profiles can be read back.
    const Field back = read_profile_csv(a / "profile.csv", make_grid(c.problem), ScalarKind::real);
    CHECK(back.size() == 512);
  }

  TEST_CASE("float formatting") {
    CHECK(format_float(0.1) == "0.10000000000000001");
    CHECK(format_float(1.0) == "1");
    CHECK(format_float(std::nan("")) == "nan");
    CHECK(dump_json(Json{{"x", 0.1}}, 0) == "{\"x\":0.10000000000000001}\n");
    CHECK(dump_json(Json{{"x", std::numeric_limits<double>::infinity()}}, 0) == "{\"x\":null}\n");
  }

  TEST_CASE("spectrum command on the exact soliton") {
    const fs::path dir = scratch("spectrum");
    RunConfig c = recipe_config("table2");
    c.spectrum.method = EigenMethod::krylov;
    const Json rep = cmd_spectrum(c, dir);
    CHECK(rep["shift_check"]["passed"] == true);
    CHECK(rep["eigenrelations"]["dominant"].get<double>() <= 1e-6);
    for (const auto& g : rep["eigenrelations"]["generators"]) CHECK(g["relative_residual"].get<double>() <= 1e-6);
    const Json s = Json::parse(read(dir / "spectrum_S.json"));
    CHECK(s["eigenvalues"].size() == 6);
    CHECK(s["eigenvalues"][0]["abs"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fs::exists(dir / "spectrum_F.json"));
    CHECK(fs::exists(dir / "hypothesis_report.json"));
  }

  TEST_CASE("spectrum command on the double-well state") {
    const Json rep = cmd_spectrum(recipe_config("table1_col34"), scratch("spectrum_dw"));
    bool violated = false;
    for (const auto& v : rep["hypotheses"]["verdicts"])
      violated |= v.get<std::string>() == "hypothesis (ii) violated: eigenvalues with modulus above one";
    CHECK(violated);
  }

  TEST_CASE("orbital command") {
    RunConfig c = recipe_config("fig67");
    c.perturbations = {{0.0, 0.0}, {0.2, 0.0}};
    const Json rep = cmd_orbital(c, scratch("orbital"));
    REQUIRE(rep["runs"].size() == 2);
    const Json& f0 = rep["runs"][0]["fit"];
    CHECK(f0["intercept_mod_2pi"].get<double>() <= 1e-8);
    CHECK(std::abs(f0["x0"].get<double>()) <= 1e-8);
    const Json& f1 = rep["runs"][1]["fit"];
    CHECK(f1["slope"].get<double>() == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(f1["intercept_mod_2pi"].get<double>() == doctest::Approx(0.2).epsilon(0.1));
  }

  TEST_CASE("exit codes") {
    std::ostringstream log, err;
    const auto bad = [] {
      Json d = ground_state_doc();
      d["factor"] = "petviashvili:abc";
      return parse_run_config(d);
    };
    CHECK(run_command("solve", bad, scratch("exit_bad"), log, err) == kExitConfigError);
    CHECK(err.str().find("factor") != std::string::npos);
    const auto missing = [] {
      RunConfig c = recipe_config("table1_col12");
      c.spectrum.at = "file";
      c.spectrum.path = "/nonexistent/profile.csv";
      return c;
    };
    CHECK(run_command("spectrum", missing, scratch("exit_missing"), log, err) == kExitConfigError);
    const auto diverging = [] {
      RunConfig c = recipe_config("table1_col12");
      c.factor = "none";
      return c;
    };
    const fs::path dir = scratch("exit_diverge");
    CHECK(run_command("solve", diverging, dir, log, err) == kExitSuccess);
    CHECK(Json::parse(read(dir / "summary.json"))["status"] == "diverged");
    const auto singular = [] {
      RunConfig c = recipe_config("table1_col12");
      c.problem.potential = "zero";
      c.problem.mu = -(std::numbers::pi / 50.0) * (std::numbers::pi / 50.0);
      return c;
    };
    CHECK(run_command("solve", singular, scratch("exit_singular"), log, err) == kExitRuntimeFailure);
    CHECK(run_command("continue", [] { return recipe_config("table1_col12"); }, scratch("exit_cont"), log,
                      err) == kExitConfigError);
  }

  TEST_CASE("command-line tool") {
    const std::string cli = TWAVE_CLI_PATH;
    if (cli.empty()) return;
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "bad.json");
      f << R"({"problem": {"family": "ground_state"}, "factor": "norm:x:2"})";
    }
    const auto run = [&](const std::string& args) {
      const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    CHECK(run("solve --config " + (dir / "bad.json").string()) == 2);
    CHECK(run("solve --recipe nope") == 2);
    CHECK(run("solve") == 2);
    CHECK(run("solve --recipe table1_col12 --out " + (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "summary.json"));
  }
}
