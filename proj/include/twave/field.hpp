#pragma once

#include <Eigen/Dense>

#include "twave/spectral.hpp"

namespace twave {

enum class ScalarKind { real, complex };

/// Node values of a real or complex function on a periodic grid. Values are
/// always stored as complex numbers; a real field keeps its imaginary parts at
/// exactly zero.
class Field {
 public:
  Field(Grid grid, ScalarKind kind, Eigen::VectorXcd values);
  Field(Grid grid, ScalarKind kind);  // zero field

  static Field real(Grid grid, const Eigen::VectorXd& values);

  const Grid& grid() const { return grid_; }
  ScalarKind kind() const { return kind_; }
  bool is_complex() const { return kind_ == ScalarKind::complex; }
  Eigen::Index size() const { return values_.size(); }

  const Eigen::VectorXcd& values() const { return values_; }
  cplx operator[](Eigen::Index j) const { return values_[j]; }

  /// Dimension of the realified space: n for real fields, 2n for complex.
  Eigen::Index real_dimension() const { return is_complex() ? 2 * size() : size(); }

  bool is_finite() const { return values_.allFinite(); }
  double norm() const { return values_.norm(); }
  double max_abs() const { return values_.cwiseAbs().maxCoeff(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double t);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double t, Field a) { return a *= t; }
  friend Field operator*(Field a, double t) { return a *= t; }

  /// Multiplication by i; the result is always complex.
  Field times_i() const;

 private:
  Grid grid_;
  ScalarKind kind_;
  Eigen::VectorXcd values_;
};

/// Real part of the Hermitian pairing, sum_j Re(conj(a_j) b_j). Equals the
/// Euclidean product of the realified vectors.
double inner(const Field& a, const Field& b);

/// l^r norm of the node values, 1 <= r <= inf (r = +infinity for the max norm).
double lr_norm(const Field& f, double r);

/// Realified coordinates: [Re] for real fields, [Re; Im] for complex ones.
Eigen::VectorXd realify(const Field& f);

/// Inverse of realify for the given grid and kind.
Field from_real(const Grid& grid, ScalarKind kind, const Eigen::VectorXd& coords);

/// Multiplies the transform of f by a symbol on the flattened spectral grid.
Field apply_symbol(const Field& f, const Eigen::VectorXcd& symbol);

/// Spectral derivative of the given order along an axis.
Field derivative(const Field& f, int order, int axis = 0);

/// Hilbert transform with respect to x (axis 0).
Field hilbert_transform(const Field& f);

/// Samples a function of the node coordinate(s).
template <class Fn>
Field sample_real(const Grid1D& grid, Fn&& fn) {
  Eigen::VectorXd v(grid.points());
  for (int j = 0; j < grid.points(); ++j) v[j] = fn(grid.node(j));
  return Field::real(grid, v);
}

template <class Fn>
Field sample_real(const Grid2D& grid, Fn&& fn) {
  const int mx = grid.x.points();
  const int mz = grid.z.points();
  Eigen::VectorXd v(static_cast<Eigen::Index>(mx) * mz);
  for (int ix = 0; ix < mx; ++ix)
    for (int iz = 0; iz < mz; ++iz) v[ix * mz + iz] = fn(grid.x.node(ix), grid.z.node(iz));
  return Field::real(grid, v);
}

}  // namespace twave
