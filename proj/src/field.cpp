#include "twave/field.hpp"

#include <cmath>
#include <limits>

#include "twave/errors.hpp"

namespace twave {

Field::Field(Grid grid, ScalarKind kind, Eigen::VectorXcd values)
    : grid_(std::move(grid)), kind_(kind), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ParameterError("field value count does not match grid");
  if (kind_ == ScalarKind::real) values_ = values_.real().cast<cplx>();
}

Field::Field(Grid grid, ScalarKind kind)
    : grid_(std::move(grid)), kind_(kind), values_(Eigen::VectorXcd::Zero(grid_.size())) {}

Field Field::real(Grid grid, const Eigen::VectorXd& values) {
  return Field(std::move(grid), ScalarKind::real, values.cast<cplx>());
}

namespace {
void check_compatible(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ParameterError("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  check_compatible(*this, other);
  values_ += other.values_;
  if (other.is_complex()) kind_ = ScalarKind::complex;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_compatible(*this, other);
  values_ -= other.values_;
  if (other.is_complex()) kind_ = ScalarKind::complex;
  return *this;
}

Field& Field::operator*=(double t) {
  values_ *= t;
  return *this;
}

Field Field::times_i() const { return Field(grid_, ScalarKind::complex, cplx(0.0, 1.0) * values_); }

double inner(const Field& a, const Field& b) {
  check_compatible(a, b);
  return a.values().dot(b.values()).real();
}

double lr_norm(const Field& f, double r) {
  if (!(r >= 1.0)) throw ParameterError("norm exponent must satisfy r >= 1");
  const Eigen::VectorXd mag = f.values().cwiseAbs();
  if (std::isinf(r)) return mag.maxCoeff();
  if (r == 1.0) return mag.sum();
  if (r == 2.0) return mag.norm();
  // Scale by the max to keep |u|^r representable.
  const double top = mag.maxCoeff();
  if (top == 0.0) return 0.0;
  return top * std::pow((mag / top).array().pow(r).sum(), 1.0 / r);
}

Eigen::VectorXd realify(const Field& f) {
  if (!f.is_complex()) return f.values().real();
  Eigen::VectorXd out(2 * f.size());
  out << f.values().real(), f.values().imag();
  return out;
}

Field from_real(const Grid& grid, ScalarKind kind, const Eigen::VectorXd& coords) {
  const Eigen::Index n = grid.size();
  if (kind == ScalarKind::real) {
    if (coords.size() != n) throw ParameterError("realified vector has the wrong length");
    return Field::real(grid, coords);
  }
  if (coords.size() != 2 * n) throw ParameterError("realified vector has the wrong length");
  Eigen::VectorXcd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = cplx(coords[j], coords[n + j]);
  return Field(grid, kind, v);
}

Field apply_symbol(const Field& f, const Eigen::VectorXcd& symbol) {
  Eigen::VectorXcd hat = forward_transform(f.grid(), f.values());
  hat.array() *= symbol.array();
  return Field(f.grid(), f.kind(), inverse_transform(f.grid(), hat));
}

Field derivative(const Field& f, int order, int axis) {
  return apply_symbol(f, derivative_symbol(f.grid(), order, axis));
}

Field hilbert_transform(const Field& f) { return apply_symbol(f, hilbert_symbol(f.grid())); }

}  // namespace twave
