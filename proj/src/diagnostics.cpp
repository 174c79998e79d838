#include "twave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "twave/errors.hpp"

namespace twave {

Field iteration_matrix_action(const Problem& problem, const Field& u_star, const Field& v) {
  if (!problem.has_jacobian()) throw ParameterError("problem does not provide the Jacobian of N");
  return problem.project(problem.solve_L(problem.project(problem.jacobian_N(u_star, v))));
}

Field jacobian_F_action(const Problem& problem, const StabilizingFactor& factor,
                        const Field& u_star, const Field& v) {
  Field out = iteration_matrix_action(problem, u_star, v);
  out += factor.directional_derivative(u_star, v) * u_star;
  return out;
}

LinearOperator iteration_matrix_operator(const Problem& problem, const Field& u_star) {
  return [&problem, u_star](const Eigen::VectorXd& x) {
    const Field v = from_real(problem.grid(), problem.kind(), x);
    return realify(iteration_matrix_action(problem, u_star, v));
  };
}

LinearOperator jacobian_F_operator(const Problem& problem, const StabilizingFactor& factor,
                                   const Field& u_star) {
  return [&problem, &factor, u_star](const Eigen::VectorXd& x) {
    const Field v = from_real(problem.grid(), problem.kind(), x);
    return realify(jacobian_F_action(problem, factor, u_star, v));
  };
}

std::vector<double> SpectrumReport::moduli() const {
  std::vector<double> out;
  for (const auto& z : eigenvalues) out.push_back(std::abs(z));
  return out;
}

SpectrumReport top_eigenvalues(const LinearOperator& action, Eigen::Index dimension, int k,
                               EigenMethod method) {
  if (k < 1 || k > dimension) throw ParameterError("top_eigenvalues: k must be in [1, dimension]");
  const bool dense = method == EigenMethod::dense ||
                     (method == EigenMethod::automatic && dimension <= kDenseEigenLimit);
  const EigenResult r =
      dense ? dense_eigen(assemble(action, dimension), k) : krylov_schur(action, dimension, k);
  SpectrumReport out;
  out.method = r.method;
  out.converged = r.converged;
  out.eigenvectors = r.vectors;
  for (Eigen::Index i = 0; i < r.values.size(); ++i) {
    out.eigenvalues.push_back(r.values[i]);
    out.residuals.push_back(r.residuals[i]);
    out.unit_cluster.push_back(std::abs(std::abs(r.values[i]) - 1.0) <= kUnitClusterTolerance);
  }
  return out;
}

HypothesisReport check_hypotheses(const SpectrumReport& spec, double p,
                                  const std::optional<Eigen::VectorXd>& seed_error) {
  constexpr double tol = kUnitClusterTolerance;
  HypothesisReport rep;
  rep.p = p;
  int at_p = 0;
  double largest_other = 0.0;
  std::vector<Eigen::Index> cluster;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const cplx z = spec.eigenvalues[i];
    if (std::abs(z - p) <= tol * std::max(1.0, std::abs(p))) {
      ++at_p;
      continue;
    }
    largest_other = std::max(largest_other, std::abs(z));
    if (std::abs(z) > 1.0 + tol) rep.above_one.push_back(z);
    if (spec.unit_cluster[i]) cluster.push_back(static_cast<Eigen::Index>(i));
  }
  rep.dominant_simple = at_p == 1;
  rep.p_is_dominant = at_p >= 1 && std::abs(p) >= largest_other;
  rep.bounded_by_one = rep.above_one.empty();
  rep.unit_cluster_size = static_cast<int>(cluster.size());

  if (!cluster.empty() && spec.eigenvectors.cols() > 0) {
    Eigen::MatrixXcd vecs(spec.eigenvectors.rows(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c)
      vecs.col(static_cast<Eigen::Index>(c)) = spec.eigenvectors.col(cluster[c]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs, Eigen::ComputeThinU);
    const auto sv = svd.singularValues();
    rep.unit_cluster_rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > 1e-6 * sv[0]) ++rep.unit_cluster_rank;
    rep.unit_cluster_semisimple = rep.unit_cluster_rank == rep.unit_cluster_size;
    if (seed_error && seed_error->size() == vecs.rows()) {
      const double en = seed_error->norm();
      if (en > 0.0) {
        const Eigen::MatrixXcd u = svd.matrixU().leftCols(rep.unit_cluster_rank);
        const Eigen::VectorXcd proj = u * (u.adjoint() * seed_error->cast<cplx>());
        rep.seed_component = proj.norm() / en;
      }
    }
  } else if (seed_error) {
    rep.seed_component = 0.0;
  }

  rep.verdicts.push_back(rep.dominant_simple ? "hypothesis (i) holds: p is a simple eigenvalue"
                                             : "hypothesis (i) violated: p is not simple");
  rep.verdicts.push_back(rep.bounded_by_one
                             ? "hypothesis (ii) holds: remaining eigenvalues have modulus <= 1"
                             : "hypothesis (ii) violated: eigenvalues with modulus above one");
  if (rep.unit_cluster_size == 0) {
    rep.verdicts.push_back("hypothesis (iii): no unit-modulus eigenvalues");
  } else {
    std::string v = "hypothesis (iii): " + std::to_string(rep.unit_cluster_size) +
                    " unit-modulus eigenvalues, eigenvector rank " +
                    std::to_string(rep.unit_cluster_rank);
    v += rep.unit_cluster_semisimple ? " (semisimple, advisory)" : " (defective, advisory)";
    if (rep.seed_component) v += "; seed component " + format_number(*rep.seed_component);
    rep.verdicts.push_back(v);
  }
  return rep;
}

ShiftCheck spectrum_shift_check(const SpectrumReport& spec_S, const SpectrumReport& spec_F,
                                double p, double q, double tolerance) {
  ShiftCheck out;
  out.tolerance = tolerance;
  std::vector<cplx> expected = spec_S.eigenvalues;
  {
    auto it = std::min_element(expected.begin(), expected.end(), [&](cplx a, cplx b) {
      return std::abs(a - p) < std::abs(b - p);
    });
    if (it == expected.end() || std::abs(*it - p) > tolerance * std::max(1.0, std::abs(p))) {
      out.note = "p not found in the S spectrum";
      return out;
    }
    expected.erase(it);
  }
  expected.push_back(p + q);
  std::stable_sort(expected.begin(), expected.end(),
                   [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  out.expected = expected;
  out.observed = spec_F.eigenvalues;

  std::vector<bool> used(expected.size(), false);
  bool ok = !out.observed.empty();
  for (const cplx z : out.observed) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < expected.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - expected[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    if (std::isfinite(best)) used[arg] = true;
    out.differences.push_back(best);
    out.max_difference = std::max(out.max_difference, best);
    if (!(best <= tolerance)) ok = false;
  }
  // Every expected eigenvalue clearly inside the computed window must be accounted for.
  const double floor = out.observed.empty() ? 0.0 : std::abs(out.observed.back());
  for (std::size_t j = 0; j < expected.size(); ++j) {
    if (!used[j] && std::abs(expected[j]) > floor + tolerance) {
      ok = false;
      out.note = "expected eigenvalue " + format_number(expected[j].real()) + " missing from F'";
    }
  }
  out.passed = ok;
  return out;
}

std::vector<Field> symmetry_generators(const Problem& problem, const Field& u) {
  std::vector<Field> out;
  for (Symmetry s : problem.symmetries()) {
    switch (s) {
      case Symmetry::gauge: out.push_back(u.times_i()); break;
      case Symmetry::translation_x: out.push_back(derivative(u, 1, 0)); break;
      case Symmetry::translation_z: out.push_back(derivative(u, 1, 1)); break;
    }
  }
  return out;
}

ErrorDecomposition decompose_error(const Field& e, const Field& u_star,
                                   const std::vector<Field>& generators) {
  std::vector<const Field*> basis{&u_star};
  for (const auto& g : generators) basis.push_back(&g);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs[i] = inner(*basis[static_cast<std::size_t>(i)], e);
    for (Eigen::Index j = 0; j < n; ++j)
      gram(i, j) = inner(*basis[static_cast<std::size_t>(i)], *basis[static_cast<std::size_t>(j)]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const auto sv = svd.singularValues();
  const double cond = sv[n - 1] > 0.0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) throw IllConditionedError("Gram matrix condition number " + format_number(cond));
  const Eigen::VectorXd c = gram.ldlt().solve(rhs);
  ErrorDecomposition out{c[0], {}, e, cond};
  out.remainder -= c[0] * u_star;
  for (Eigen::Index i = 1; i < n; ++i) {
    out.beta.push_back(c[i]);
    out.remainder -= c[i] * *basis[static_cast<std::size_t>(i)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orbit identification

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int peak_index(const Field& u) {
  Eigen::Index arg = 0;
  u.values().cwiseAbs().maxCoeff(&arg);
  return static_cast<int>(arg);
}

double wrap_mod_2pi(double v) {
  double r = std::fmod(v, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // Values a rounding error below 2 pi represent 0.
  if (kTwoPi - r < 1e-9) r = 0.0;
  return r;
}

}  // namespace

OrbitFit fit_phase_line(const Field& u, std::optional<std::pair<int, int>> window) {
  if (u.grid().dimension() != 1) throw ParameterError("phase fit needs a 1D field");
  const Grid1D& g = u.grid().axis(0);
  const int m = g.points();
  const int peak = peak_index(u);
  const double top = std::abs(u[peak]);
  if (!(top > 0.0)) throw ParameterError("phase fit: field vanishes");
  int lo = peak, hi = peak;
  if (window) {
    lo = window->first;
    hi = window->second;
    if (lo < 0 || hi >= m || lo > hi) throw ParameterError("phase fit: window out of range");
  } else {
    while (lo > 0 && std::abs(u[lo - 1]) >= 0.05 * top) --lo;
    while (hi < m - 1 && std::abs(u[hi + 1]) >= 0.05 * top) ++hi;
  }
  if (hi - lo + 1 < 8) throw ParameterError("phase fit: window has fewer than 8 nodes");

  // Unwrap outward from the anchor (the peak when it lies in the window).
  const int anchor = std::clamp(peak, lo, hi);
  std::vector<double> phase(static_cast<std::size_t>(m), 0.0);
  phase[static_cast<std::size_t>(anchor)] = std::arg(u[anchor]);
  auto unwrap = [&](int j, int from) {
    const double raw = std::arg(u[j]);
    const double prev = phase[static_cast<std::size_t>(from)];
    phase[static_cast<std::size_t>(j)] = raw - kTwoPi * std::round((raw - prev) / kTwoPi);
  };
  for (int j = anchor + 1; j <= hi; ++j) unwrap(j, j - 1);
  for (int j = anchor - 1; j >= lo; --j) unwrap(j, j + 1);

  const int count = hi - lo + 1;
  Eigen::MatrixXd a(count, 2);
  Eigen::VectorXd y(count);
  for (int j = lo; j <= hi; ++j) {
    a(j - lo, 0) = g.node(j);
    a(j - lo, 1) = 1.0;
    y[j - lo] = phase[static_cast<std::size_t>(j)];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
  OrbitFit fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.intercept_mod_2pi = wrap_mod_2pi(coef[1]);
  fit.window_begin = lo;
  fit.window_end = hi;
  return fit;
}

OrbitFit orbit_match(const Field& u, const SolitonParameters& params) {
  if (u.grid().dimension() != 1) throw ParameterError("orbit match needs a 1D field");
  const Grid1D& g = u.grid().axis(0);
  const int m = g.points();
  const double a = params.a();
  const double sigma = params.sigma;
  if (!(a > 0.0)) throw ParameterError("orbit match: a must be positive");
  const double amp = std::pow(a * (sigma + 1.0), 1.0 / (2.0 * sigma));
  const double period = 2.0 * g.half_length();
  auto wrap = [&](double y) { return y - period * std::round(y / period); };
  auto rho = [&](double y) { return amp * std::pow(1.0 / std::cosh(sigma * std::sqrt(a) * y), 1.0 / sigma); };
  auto drho = [&](double y) { return -std::sqrt(a) * std::tanh(sigma * std::sqrt(a) * y) * rho(y); };

  const int peak = peak_index(u);
  if (!(std::abs(u[peak]) > 0.0)) throw ParameterError("orbit match: no peak found");
  const Eigen::VectorXd mod = u.values().cwiseAbs();

  // Coarse center: best discrete shift of the modulus cross-correlation near the peak.
  double best_shift = g.node(peak);
  double best_corr = -1.0;
  for (int d = -4; d <= 4; ++d) {
    const double s = g.node(peak) + d * g.spacing();
    double c = 0.0;
    for (int j = 0; j < m; ++j) c += mod[j] * rho(wrap(g.node(j) - s));
    if (c > best_corr) {
      best_corr = c;
      best_shift = s;
    }
  }
  // Refine by solving d/ds sum (|u| - rho(x - s))^2 = 0 with secant steps.
  auto slope = [&](double s) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double y = wrap(g.node(j) - s);
      acc += (mod[j] - rho(y)) * drho(y);
    }
    return acc;
  };
  double s0 = best_shift - 0.25 * g.spacing();
  double s1 = best_shift + 0.25 * g.spacing();
  double f0 = slope(s0), f1 = slope(s1);
  for (int it = 0; it < 60 && f1 != f0; ++it) {
    const double s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
    s0 = s1;
    f0 = f1;
    s1 = s2;
    f1 = slope(s1);
    if (std::abs(s1 - s0) <= 1e-14 * std::max(1.0, std::abs(s1))) break;
  }
  const double x0 = wrap(s1);

  SolitonParameters centered = params;
  centered.x0 = x0;
  centered.theta0 = 0.0;
  const Field reference = exact_soliton_profile(centered, g);
  const cplx pairing = reference.values().dot(u.values());  // sum conj(ref) u
  const double theta0 = std::arg(pairing);
  centered.theta0 = theta0;
  const Field orbit = exact_soliton_profile(centered, g);

  OrbitFit fit = fit_phase_line(u);
  fit.x0 = x0;
  fit.theta0 = theta0;
  fit.group_shift = -x0;
  fit.group_phase_combination = theta0 + 0.5 * params.lambda2 * fit.group_shift;
  fit.modulus_distance = (u.values().cwiseAbs() - orbit.values().cwiseAbs()).cwiseAbs().maxCoeff();
  fit.sup_distance = (u.values() - orbit.values()).cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace twave
