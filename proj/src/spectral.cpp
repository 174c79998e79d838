#include "twave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "twave/errors.hpp"

namespace twave {

Grid1D::Grid1D(double half_length, int points) : half_length_(half_length), points_(points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ParameterError("grid half-length must be positive and finite");
  if (points < 2 || points % 2 != 0) throw ParameterError("grid point count must be even and >= 2");
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(points_));
  for (int j = 0; j < points_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

Grid::Grid(const Grid1D& line) : axes_{line} {}
Grid::Grid(const Grid2D& plane) : axes_{plane.x, plane.z} {}

Eigen::Index Grid::size() const {
  Eigen::Index n = 1;
  for (const auto& a : axes_) n *= a.points();
  return n;
}

std::vector<double> wavenumbers(const Grid1D& grid) {
  const int m = grid.points();
  const double scale = std::numbers::pi / grid.half_length();
  std::vector<double> k(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) k[static_cast<std::size_t>(j)] = scale * (j < m / 2 ? j : j - m);
  return k;
}

namespace {

// FFTW planning is not thread-safe; plans are created once per shape under a
// lock and executed with the new-array interface, which is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(dims, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in, out, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

std::vector<int> dims_of(const Grid& grid) {
  std::vector<int> dims;
  for (int i = 0; i < grid.dimension(); ++i) dims.push_back(grid.axis(i).points());
  return dims;
}

Eigen::VectorXcd execute(const Grid& grid, const Eigen::VectorXcd& in, int sign) {
  if (in.size() != grid.size()) throw ParameterError("value count does not match grid size");
  Eigen::VectorXcd input = in;
  Eigen::VectorXcd out(in.size());
  fftw_plan plan = PlanCache::instance().get(dims_of(grid), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(input.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Eigen::VectorXcd forward_transform(const Grid& grid, const Eigen::VectorXcd& values) {
  return execute(grid, values, FFTW_FORWARD);
}

Eigen::VectorXcd inverse_transform(const Grid& grid, const Eigen::VectorXcd& coefficients) {
  Eigen::VectorXcd out = execute(grid, coefficients, FFTW_BACKWARD);
  out /= static_cast<double>(grid.size());
  return out;
}

Eigen::VectorXcd derivative_symbol(const Grid& grid, int order, int axis) {
  if (order < 1) throw ParameterError("derivative order must be positive");
  if (axis < 0 || axis >= grid.dimension()) throw ParameterError("derivative axis out of range");
  const Grid1D& a = grid.axis(axis);
  auto k = wavenumbers(a);
  std::vector<cplx> line(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    line[j] = std::pow(cplx(0.0, k[j]), order);
    if (order % 2 == 1 && static_cast<int>(j) == nyquist_index(a)) line[j] = 0.0;
  }
  Eigen::VectorXcd symbol(grid.size());
  if (grid.dimension() == 1) {
    for (Eigen::Index j = 0; j < symbol.size(); ++j) symbol[j] = line[static_cast<std::size_t>(j)];
    return symbol;
  }
  const int mx = grid.axis(0).points();
  const int mz = grid.axis(1).points();
  for (int ix = 0; ix < mx; ++ix)
    for (int iz = 0; iz < mz; ++iz)
      symbol[ix * mz + iz] = line[static_cast<std::size_t>(axis == 0 ? ix : iz)];
  return symbol;
}

Eigen::VectorXcd hilbert_symbol(const Grid& grid) {
  const Grid1D& a = grid.axis(0);
  auto k = wavenumbers(a);
  std::vector<cplx> line(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double sign = (k[j] > 0.0) - (k[j] < 0.0);
    line[j] = cplx(0.0, -sign);
  }
  line[static_cast<std::size_t>(nyquist_index(a))] = 0.0;
  Eigen::VectorXcd symbol(grid.size());
  const int mz = grid.dimension() == 2 ? grid.axis(1).points() : 1;
  for (Eigen::Index j = 0; j < symbol.size(); ++j)
    symbol[j] = line[static_cast<std::size_t>(j / mz)];
  return symbol;
}

Eigen::MatrixXd diff_matrix(const Grid1D& grid, int order) {
  if (order != 1 && order != 2) throw ParameterError("diff_matrix supports orders 1 and 2");
  const int m = grid.points();
  const double angle = 2.0 * std::numbers::pi / m;
  // Formulas are for the 2*pi-periodic interval; rescale to period 2l.
  const double scale = std::numbers::pi / grid.half_length();
  Eigen::MatrixXd d(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int s = i - j;
      const double parity = (s % 2 == 0) ? 1.0 : -1.0;
      if (order == 1) {
        d(i, j) = s == 0 ? 0.0 : 0.5 * parity / std::tan(0.5 * s * angle);
      } else if (s == 0) {
        d(i, j) = -std::numbers::pi * std::numbers::pi / (3.0 * angle * angle) - 1.0 / 6.0;
      } else {
        const double sn = std::sin(0.5 * s * angle);
        d(i, j) = -0.5 * parity / (sn * sn);
      }
    }
  }
  return order == 1 ? Eigen::MatrixXd(scale * d) : Eigen::MatrixXd(scale * scale * d);
}

}  // namespace twave
