#include "twave/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "twave/errors.hpp"

namespace twave {

std::string format_float(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

void emit(const Json& v, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent > 0) out += '\n' + std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        emit(it.value(), indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        emit(e, indent, depth + 1, out);
      }
      pad(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_float(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  emit(value, indent, 0, out);
  out += '\n';
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& value) {
  write_text(path, dump_json(value));
}

std::string trace_csv(const IterationTrace& trace) {
  std::string out = "iter,residual,factor_discrepancy,norm\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.n) + ',' + format_float(r.residual) + ',' +
           format_float(r.factor_discrepancy) + ',' + format_float(r.norm) + '\n';
  }
  return out;
}

std::string profile_csv(const Field& field) {
  const Grid& g = field.grid();
  std::string out;
  if (g.dimension() == 1) {
    out = "x,re,im\n";
    for (int j = 0; j < g.axis(0).points(); ++j)
      out += format_float(g.axis(0).node(j)) + ',' + format_float(field[j].real()) + ',' +
             format_float(field[j].imag()) + '\n';
    return out;
  }
  out = "x,z,re,im\n";
  const int mx = g.axis(0).points();
  const int mz = g.axis(1).points();
  for (int ix = 0; ix < mx; ++ix)
    for (int iz = 0; iz < mz; ++iz) {
      const cplx v = field[ix * mz + iz];
      out += format_float(g.axis(0).node(ix)) + ',' + format_float(g.axis(1).node(iz)) + ',' +
             format_float(v.real()) + ',' + format_float(v.imag()) + '\n';
    }
  return out;
}

std::pair<std::string, std::string> cross_sections_csv(const Field& field) {
  const Grid& g = field.grid();
  if (g.dimension() != 2) throw ParameterError("cross sections need a 2D field");
  const int mx = g.axis(0).points();
  const int mz = g.axis(1).points();
  Eigen::Index peak = 0;
  field.values().cwiseAbs().maxCoeff(&peak);
  const int px = static_cast<int>(peak / mz);
  const int pz = static_cast<int>(peak % mz);
  std::string xs = "x,re,im\n";
  for (int ix = 0; ix < mx; ++ix) {
    const cplx v = field[ix * mz + pz];
    xs += format_float(g.axis(0).node(ix)) + ',' + format_float(v.real()) + ',' +
          format_float(v.imag()) + '\n';
  }
  std::string zs = "z,re,im\n";
  for (int iz = 0; iz < mz; ++iz) {
    const cplx v = field[px * mz + iz];
    zs += format_float(g.axis(1).node(iz)) + ',' + format_float(v.real()) + ',' +
          format_float(v.imag()) + '\n';
  }
  return {xs, zs};
}

Field read_profile_csv(const std::filesystem::path& path, const Grid& grid, ScalarKind kind) {
  std::ifstream f(path);
  if (!f) throw ConfigError("state file not found: " + path.string());
  std::string line;
  std::getline(f, line);
  const std::size_t columns = grid.dimension() == 1 ? 3 : 4;
  const std::string expected = grid.dimension() == 1 ? "x,re,im" : "x,z,re,im";
  if (line.rfind(expected, 0) != 0)
    throw ConfigError("state file " + path.string() + " lacks the header '" + expected + "'");
  Eigen::VectorXcd values(grid.size());
  Eigen::Index count = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != columns) throw ConfigError("state file row has the wrong column count");
    if (count >= grid.size()) throw ConfigError("state file has more rows than grid nodes");
    values[count++] = cplx(row[columns - 2], row[columns - 1]);
  }
  if (count != grid.size()) throw ConfigError("state file has fewer rows than grid nodes");
  return Field(grid, kind, values);
}

Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

Json to_json(const SpectrumReport& r) {
  Json vals = Json::array(), res = Json::array(), cl = Json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    vals.push_back(complex_json(r.eigenvalues[i]));
    res.push_back(r.residuals[i]);
    cl.push_back(static_cast<bool>(r.unit_cluster[i]));
  }
  return Json{{"method", r.method},
              {"converged", r.converged},
              {"eigenvalues", vals},
              {"residuals", res},
              {"unit_cluster", cl}};
}

Json to_json(const HypothesisReport& r) {
  Json above = Json::array();
  for (cplx z : r.above_one) above.push_back(complex_json(z));
  Json out{{"p", r.p},
           {"p_simple", r.dominant_simple},
           {"p_dominant", r.p_is_dominant},
           {"bounded_by_one", r.bounded_by_one},
           {"above_one", above},
           {"unit_cluster_size", r.unit_cluster_size},
           {"unit_cluster_rank", r.unit_cluster_rank},
           {"unit_cluster_semisimple", r.unit_cluster_semisimple}};
  out["seed_component"] = r.seed_component ? Json(*r.seed_component) : Json(nullptr);
  out["verdicts"] = r.verdicts;
  return out;
}

Json to_json(const ShiftCheck& c) {
  Json exp = Json::array(), obs = Json::array();
  for (cplx z : c.expected) exp.push_back(complex_json(z));
  for (cplx z : c.observed) obs.push_back(complex_json(z));
  return Json{{"passed", c.passed},         {"tolerance", c.tolerance},
              {"max_difference", c.max_difference}, {"expected", exp},
              {"observed", obs},            {"differences", c.differences},
              {"note", c.note}};
}

Json to_json(const OrbitFit& f) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"intercept_mod_2pi", f.intercept_mod_2pi},
              {"window", {f.window_begin, f.window_end}},
              {"x0", f.x0},
              {"theta0", f.theta0},
              {"group_shift", f.group_shift},
              {"group_phase_combination", f.group_phase_combination},
              {"modulus_distance", f.modulus_distance},
              {"sup_distance", f.sup_distance}};
}

Json to_json(const IterationConfig& c) {
  return Json{{"max_iterations", c.max_iterations},
              {"residual_tolerance", c.residual_tolerance},
              {"factor_tolerance", c.factor_tolerance},
              {"divergence_guard", c.divergence_guard},
              {"stop_rule", to_string(c.stop_rule)},
              {"keep_history", c.keep_history}};
}

}  // namespace twave
