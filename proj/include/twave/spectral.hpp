#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace twave {

using cplx = std::complex<double>;

/// Uniform periodic grid on (-l, l) with m nodes x_j = -l + j h, h = 2l/m.
class Grid1D {
 public:
  Grid1D(double half_length, int points);

  double half_length() const { return half_length_; }
  int points() const { return points_; }
  double spacing() const { return 2.0 * half_length_ / points_; }
  double node(int j) const { return -half_length_ + j * spacing(); }
  std::vector<double> nodes() const;

  bool operator==(const Grid1D&) const = default;

 private:
  double half_length_;
  int points_;
};

/// Tensor product of an X axis and a Z axis.
struct Grid2D {
  Grid1D x;
  Grid1D z;

  bool operator==(const Grid2D&) const = default;
};

/// A periodic grid of dimension one or two. Values on a 2D grid are stored
/// x-major: index = ix * mz + iz.
class Grid {
 public:
  Grid(const Grid1D& line);   // NOLINT(google-explicit-constructor)
  Grid(const Grid2D& plane);  // NOLINT(google-explicit-constructor)

  int dimension() const { return static_cast<int>(axes_.size()); }
  const Grid1D& axis(int i) const { return axes_.at(static_cast<std::size_t>(i)); }
  Eigen::Index size() const;

  bool operator==(const Grid&) const = default;

 private:
  std::vector<Grid1D> axes_;
};

/// Wavenumbers k_j = (pi/l) j in FFT-native order: 0, 1, ..., m/2-1, -m/2, ..., -1.
std::vector<double> wavenumbers(const Grid1D& grid);

/// Index of the Nyquist mode (-m/2) in native order.
inline int nyquist_index(const Grid1D& grid) { return grid.points() / 2; }

/// Plain forward DFT over all axes (no normalization).
Eigen::VectorXcd forward_transform(const Grid& grid, const Eigen::VectorXcd& values);

/// Inverse DFT over all axes, carrying the 1/n factor.
Eigen::VectorXcd inverse_transform(const Grid& grid, const Eigen::VectorXcd& coefficients);

/// Spectral symbol of d^order/dx_axis^order: (i k)^order, Nyquist zeroed for odd orders.
Eigen::VectorXcd derivative_symbol(const Grid& grid, int order, int axis = 0);

/// Symbol of the Hilbert transform along axis 0: -i sign(k), with sign(0) = 0 and
/// the Nyquist mode zeroed.
Eigen::VectorXcd hilbert_symbol(const Grid& grid);

/// Dense pseudospectral differentiation matrix of order 1 or 2, built from the
/// closed-form cotangent / cosecant formulas.
Eigen::MatrixXd diff_matrix(const Grid1D& grid, int order);

}  // namespace twave
