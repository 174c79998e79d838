#include "twave/run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "twave/errors.hpp"

namespace twave {

// Generated from recipes/*.json at configure time.
const std::map<std::string, std::string>& recipe_texts();

namespace {

// Reads fields from one JSON object and rejects any key it was not asked about.
class Reader {
 public:
  Reader(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return object_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(raw(key), field(key));
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> allowed) {
    const std::string v = text(key, fallback);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    throw ConfigError(field(key) + ": '" + v + "' is not one of " + list);
  }

  Reader child(const std::string& key) { return Reader(raw(key), field(key)); }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown key");
  }

  /// Numbers, or strings of the form "<a>pi" meaning a * pi.
  static double as_number(const Json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.size() > 2 && s.substr(s.size() - 2) == "pi") {
        try {
          std::size_t used = 0;
          const std::string head = s.substr(0, s.size() - 2);
          const double a = std::stod(head, &used);
          if (used == head.size()) return a * std::numbers::pi;
        } catch (const std::exception&) {
        }
      }
    }
    throw ConfigError(where + ": expected a number");
  }

 private:
  const Json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_grid(Reader& r, ProblemSpec& p) {
  const bool two_d = p.family == "benjamin";
  p.half_length = two_d ? 32.0 * std::numbers::pi : 50.0;
  p.points = two_d ? 128 : 512;
  if (r.has("grid")) {
    Reader g = r.child("grid");
    p.half_length = g.number("half_length", p.half_length);
    p.points = g.integer("points", p.points);
    if (two_d) {
      p.half_length_z = g.number("half_length_z", p.half_length);
      p.points_z = g.integer("points_z", p.points);
    }
    g.finish();
  }
  if (two_d && p.points_z == 0) {
    p.half_length_z = p.half_length;
    p.points_z = p.points;
  }
  if (!(p.half_length > 0.0) || p.points < 2 || p.points % 2 != 0)
    throw ConfigError(r.field("grid") + ": half_length must be positive and points even");
  if (two_d && (!(p.half_length_z > 0.0) || p.points_z < 2 || p.points_z % 2 != 0))
    throw ConfigError(r.field("grid") + ": z axis must have positive length and even points");
}

ProblemSpec read_problem(Reader r) {
  ProblemSpec p;
  p.family = r.choice("family", p.family, {"ground_state", "soliton", "benjamin"});
  read_grid(r, p);
  if (p.family == "ground_state") {
    if (r.has("potential")) {
      Reader v = r.child("potential");
      p.potential = v.choice("kind", p.potential, {"sech2", "double_well", "zero"});
      p.potential_amplitude = v.number("amplitude", p.potential_amplitude);
      p.well_separation = v.number("separation", p.well_separation);
      v.finish();
    }
    p.mu = r.number("mu", p.mu);
    p.sign = r.choice("nonlinearity", "focusing", {"focusing", "defocusing"}) == "focusing"
                 ? CubicSign::focusing
                 : CubicSign::defocusing;
  } else if (p.family == "soliton") {
    p.soliton.sigma = r.number("sigma", 1.0);
    p.soliton.lambda1 = r.number("lambda1", 1.0);
    p.soliton.lambda2 = r.number("lambda2", 1.0);
    p.soliton.x0 = r.number("x0", 0.0);
    p.soliton.theta0 = r.number("theta0", 0.0);
    if (!(p.soliton.sigma > 0.0)) throw ConfigError(r.field("sigma") + ": must be positive");
    if (!(p.soliton.a() > 0.0))
      throw ConfigError(r.field("lambda1") + ": lambda1 - lambda2^2/4 must be positive");
  } else {
    p.gamma_b = r.number("Gamma", 0.0);
    p.cs = r.number("cs", 1.0);
    if (!(p.cs > 0.0)) throw ConfigError(r.field("cs") + ": must be positive");
    if (!(p.gamma_b >= 0.0)) throw ConfigError(r.field("Gamma") + ": must be non-negative");
  }
  r.finish();
  return p;
}

IterationConfig read_iteration(Reader r) {
  IterationConfig c;
  c.max_iterations = r.integer("max_iterations", c.max_iterations);
  c.residual_tolerance = r.number("residual_tolerance", c.residual_tolerance);
  c.factor_tolerance = r.number("factor_tolerance", c.factor_tolerance);
  c.divergence_guard = r.number("divergence_guard", c.divergence_guard);
  c.stop_rule = r.choice("stop_rule", "residual", {"residual", "residual_and_factor"}) == "residual"
                    ? StopRule::residual
                    : StopRule::residual_and_factor;
  c.keep_history = r.boolean("keep_history", false);
  r.finish();
  try {
    c.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(r.field("") + " " + e.what());
  }
  return c;
}

SeedSpec read_seed(Reader r) {
  SeedSpec s;
  s.kind = r.choice("kind", s.kind, {"gaussian", "exact_perturbed", "file"});
  s.amplitude = r.number("amplitude", s.amplitude);
  s.width = r.number("width", s.width);
  s.antisymmetric = r.boolean("antisymmetric", false);
  s.eps1 = r.number("eps1", 0.0);
  s.eps2 = r.number("eps2", 0.0);
  s.path = r.text("path", "");
  r.finish();
  if (s.kind == "gaussian" && (s.amplitude == 0.0 || !(s.width > 0.0)))
    throw ConfigError(r.field("amplitude") + ": gaussian seed needs amplitude != 0 and width > 0");
  if (s.kind == "file" && s.path.empty()) throw ConfigError(r.field("path") + ": required for file seeds");
  return s;
}

SpectrumSpec read_spectrum(Reader r) {
  SpectrumSpec s;
  s.k = r.integer("k", s.k);
  if (s.k < 1 || s.k > 20) throw ConfigError(r.field("k") + ": must be between 1 and 20");
  s.at = r.choice("at", s.at, {"solution", "seed", "exact", "file"});
  s.path = r.text("path", "");
  const std::string m = r.choice("method", "auto", {"auto", "dense", "krylov"});
  s.method = m == "dense" ? EigenMethod::dense : m == "krylov" ? EigenMethod::krylov
                                                              : EigenMethod::automatic;
  r.finish();
  if (s.at == "file" && s.path.empty()) throw ConfigError(r.field("path") + ": required when at = file");
  return s;
}

std::vector<double> read_numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(Reader::as_number(e, where));
  return out;
}

ContinuationSpec read_continuation(Reader r) {
  ContinuationSpec c;
  c.parameter = r.text("parameter", c.parameter);
  if (!r.has("values")) throw ConfigError(r.field("values") + ": required");
  c.values = read_numbers(r.raw("values"), r.field("values"));
  c.max_bisections = r.integer("max_bisections", c.max_bisections);
  if (r.has("compare")) {
    Reader cmp = r.child("compare");
    ComparisonSpec s;
    s.at = cmp.number("at", c.values.empty() ? 0.0 : c.values.back());
    if (cmp.has("factors")) {
      const Json& f = cmp.raw("factors");
      if (!f.is_array()) throw ConfigError(cmp.field("factors") + ": expected an array of strings");
      for (const auto& e : f) {
        if (!e.is_string()) throw ConfigError(cmp.field("factors") + ": expected strings");
        s.factors.push_back(e.get<std::string>());
      }
    }
    cmp.finish();
    c.compare = s;
  }
  r.finish();
  HomotopyPath probe;
  probe.values = c.values;
  probe.max_bisections = c.max_bisections;
  try {
    probe.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(r.field("values") + ": " + e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_run_config(const Json& document) {
  Reader r(document, "");
  RunConfig c;
  c.source = document;
  c.name = r.text("name", c.name);
  if (!r.has("problem")) throw ConfigError("problem: required");
  c.problem = read_problem(r.child("problem"));
  c.factor = r.text("factor", c.factor);
  c.allow_unstable = r.boolean("allow_unstable", false);
  c.solver = r.choice("solver", c.solver, {"stabilized", "newton"});
  if (r.has("iteration")) c.iteration = read_iteration(r.child("iteration"));
  if (r.has("seed")) c.seed = read_seed(r.child("seed"));
  if (r.has("spectrum")) c.spectrum = read_spectrum(r.child("spectrum"));
  if (r.has("orbital")) {
    Reader o = r.child("orbital");
    if (o.has("perturbations")) {
      const Json& list = o.raw("perturbations");
      if (!list.is_array()) throw ConfigError("orbital.perturbations: expected an array of pairs");
      for (const auto& pair : list) {
        const auto v = read_numbers(pair, "orbital.perturbations");
        if (v.size() != 2) throw ConfigError("orbital.perturbations: each entry is [eps1, eps2]");
        c.perturbations.emplace_back(v[0], v[1]);
      }
    }
    o.finish();
  }
  if (r.has("continuation")) c.continuation = read_continuation(r.child("continuation"));
  if (r.has("output")) {
    Reader o = r.child("output");
    c.output_dir = o.text("directory", c.output_dir);
    o.finish();
  }
  r.finish();

  if (c.seed.kind == "exact_perturbed" && c.problem.family != "soliton")
    throw ConfigError("seed.kind: exact_perturbed needs the soliton family");
  if (c.spectrum.at == "exact" && c.problem.family != "soliton")
    throw ConfigError("spectrum.at: exact needs the soliton family");
  // Validate the factor descriptor syntax early so that errors name the field.
  if (c.factor != "none") {
    try {
      make_factor(c, make_problem(c.problem));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("factor: ") + e.what());
    } catch (const PropertyViolationError& e) {
      throw ConfigError(std::string("factor: ") + e.what());
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("problem: ") + e.what());
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config file not found: " + path.string());
  Json doc;
  try {
    doc = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(doc);
}

const std::map<std::string, std::string>& builtin_recipes() { return recipe_texts(); }

RunConfig recipe_config(const std::string& name) {
  const auto& all = builtin_recipes();
  const auto it = all.find(name);
  if (it == all.end()) {
    std::string names;
    for (const auto& [k, v] : all) names += (names.empty() ? "" : ", ") + k;
    throw ConfigError("unknown recipe '" + name + "' (available: " + names + ")");
  }
  return parse_run_config(Json::parse(it->second));
}

Grid make_grid(const ProblemSpec& spec) {
  if (spec.family == "benjamin")
    return Grid2D{Grid1D(spec.half_length, spec.points), Grid1D(spec.half_length_z, spec.points_z)};
  return Grid1D(spec.half_length, spec.points);
}

ProblemPtr make_problem(const ProblemSpec& spec) {
  const Grid grid = make_grid(spec);
  if (spec.family == "soliton") return nls_soliton(spec.soliton, grid.axis(0));
  if (spec.family == "benjamin")
    return benjamin_lump(spec.gamma_b, spec.cs, Grid2D{grid.axis(0), grid.axis(1)});
  const Grid1D& g = grid.axis(0);
  Eigen::VectorXd v;
  if (spec.potential == "sech2") v = sech2_potential(g, spec.potential_amplitude);
  else if (spec.potential == "double_well")
    v = double_well_potential(g, spec.potential_amplitude, spec.well_separation);
  else v = Eigen::VectorXd::Zero(g.points());
  return nls_ground_state(v, spec.mu, g, spec.sign);
}

ProblemPtr make_problem(const ProblemSpec& spec, const std::string& parameter, double value) {
  ProblemSpec s = spec;
  if (s.family == "benjamin" && parameter == "Gamma") s.gamma_b = value;
  else if (s.family == "benjamin" && parameter == "cs") s.cs = value;
  else if (s.family == "ground_state" && parameter == "mu") s.mu = value;
  else if (s.family == "soliton" && parameter == "lambda1") s.soliton.lambda1 = value;
  else if (s.family == "soliton" && parameter == "lambda2") s.soliton.lambda2 = value;
  else if (s.family == "soliton" && parameter == "sigma") s.soliton.sigma = value;
  else
    throw ConfigError("continuation.parameter: '" + parameter + "' is not a parameter of " +
                      s.family);
  return make_problem(s);
}

FactorPtr make_factor(const std::string& descriptor, bool allow_unstable,
                      const ProblemPtr& problem) {
  if (descriptor == "none") return nullptr;
  return parse_factor(descriptor, problem, FactorOptions{allow_unstable});
}

FactorPtr make_factor(const RunConfig& config, const ProblemPtr& problem) {
  return make_factor(config.factor, config.allow_unstable, problem);
}

Field make_seed(const RunConfig& config, const Problem& problem) {
  const SeedSpec& s = config.seed;
  if (s.kind == "file") return read_profile_csv(s.path, problem.grid(), problem.kind());
  if (s.kind == "exact_perturbed") {
    const auto* sol = dynamic_cast<const SolitonProblem*>(&problem);
    if (!sol) throw ConfigError("seed.kind: exact_perturbed needs the soliton family");
    const Field u = sol->exact_profile();
    return u + s.eps1 * u.times_i() + s.eps2 * derivative(u, 1);
  }
  const Field g = gaussian_seed(problem.grid(), s.amplitude, s.width, s.antisymmetric);
  return problem.project(Field(g.grid(), problem.kind(), g.values()));
}

}  // namespace twave
