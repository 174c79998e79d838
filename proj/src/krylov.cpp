#include "twave/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "twave/errors.hpp"

namespace twave {

Eigen::MatrixXd assemble(const LinearOperator& op, Eigen::Index dimension) {
  Eigen::MatrixXd a(dimension, dimension);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dimension);
  for (Eigen::Index j = 0; j < dimension; ++j) {
    e[j] = 1.0;
    a.col(j) = op(e);
    e[j] = 0.0;
  }
  return a;
}

namespace {

std::vector<Eigen::Index> order_by_modulus(const Eigen::VectorXcd& values) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  // Ties (conjugate pairs) are broken by larger imaginary part first, for determinism.
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return values[a].imag() > values[b].imag();
  });
  return idx;
}

}  // namespace

EigenResult dense_eigen(const Eigen::MatrixXd& a, int k) {
  if (a.rows() != a.cols()) throw ParameterError("dense_eigen needs a square matrix");
  if (k < 1 || k > a.rows()) throw ParameterError("dense_eigen: k out of range");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
  if (solver.info() != Eigen::Success) throw Error("dense eigensolver failed");
  const Eigen::VectorXcd all = solver.eigenvalues();
  const Eigen::MatrixXcd vecs = solver.eigenvectors();
  const auto idx = order_by_modulus(all);
  EigenResult out;
  out.method = "dense";
  out.values.resize(k);
  out.vectors.resize(a.rows(), k);
  out.residuals.resize(k);
  const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
  for (int i = 0; i < k; ++i) {
    const Eigen::Index j = idx[static_cast<std::size_t>(i)];
    out.values[i] = all[j];
    Eigen::VectorXcd v = vecs.col(j);
    v.normalize();
    out.vectors.col(i) = v;
    out.residuals[i] = (ac * v - all[j] * v).norm();
  }
  return out;
}

void swap_schur_pair(Eigen::MatrixXcd& t, Eigen::MatrixXcd& q, Eigen::Index i) {
  const std::complex<double> t11 = t(i, i);
  const std::complex<double> t22 = t(i + 1, i + 1);
  if (t11 == t22) return;
  Eigen::JacobiRotation<std::complex<double>> g;
  g.makeGivens(t(i, i + 1), t22 - t11);
  t.applyOnTheLeft(i, i + 1, g.adjoint());
  t.applyOnTheRight(i, i + 1, g);
  q.applyOnTheRight(i, i + 1, g);
  t(i + 1, i) = 0.0;
}

namespace {

using Cvec = Eigen::VectorXcd;
using Cmat = Eigen::MatrixXcd;

Cvec apply_complex(const LinearOperator& op, const Cvec& v) {
  const Eigen::VectorXd re = op(v.real());
  const Eigen::VectorXd im = op(v.imag());
  Cvec out(v.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

// Orders the triangular factor so that diagonal moduli are non-increasing.
void sort_schur(Cmat& t, Cmat& q) {
  const Eigen::Index m = t.rows();
  for (Eigen::Index pass = 0; pass < m; ++pass) {
    bool swapped = false;
    for (Eigen::Index i = 0; i + 1 < m - pass; ++i) {
      if (std::abs(t(i + 1, i + 1)) > std::abs(t(i, i)) * (1.0 + 1e-14)) {
        swap_schur_pair(t, q, i);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
}

// Eigenvectors of the leading k x k block of an upper-triangular matrix.
Cmat triangular_eigenvectors(const Cmat& t, Eigen::Index k) {
  Cmat y = Cmat::Zero(k, k);
  const double small = 1e-14 * std::max(1.0, t.topLeftCorner(k, k).cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < k; ++j) {
    y(j, j) = 1.0;
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      std::complex<double> sum = 0.0;
      for (Eigen::Index l = i + 1; l <= j; ++l) sum += t(i, l) * y(l, j);
      std::complex<double> d = t(i, i) - t(j, j);
      if (std::abs(d) < small) d = small;
      y(i, j) = -sum / d;
    }
    y.col(j).normalize();
  }
  return y;
}

}  // namespace

EigenResult krylov_schur(const LinearOperator& op, Eigen::Index n, int k,
                         const KrylovSchurOptions& options) {
  if (k < 1 || k > n) throw ParameterError("krylov_schur: k out of range");
  int m = options.subspace > 0 ? options.subspace : std::max(2 * k + 1, k + 20);
  m = static_cast<int>(std::min<Eigen::Index>(m, n));
  if (m <= k && m < n) m = k + 1;

  Cmat v = Cmat::Zero(n, m + 1);
  Cmat h = Cmat::Zero(m + 1, m);
  {
    Cvec start(n);
    for (Eigen::Index j = 0; j < n; ++j)
      start[j] = 1.0 + 0.5 * std::sin(1.2345 * static_cast<double>(j)) +
                 0.25 * std::cos(0.5432 * static_cast<double>(j) * static_cast<double>(j % 7));
    v.col(0) = start.normalized();
  }

  EigenResult out;
  out.method = "krylov-schur";
  int active = 0;  // columns of v already in the decomposition
  int size = m;    // current subspace size (shrinks on invariant subspaces)
  Cmat t, q;
  for (int restart = 0;; ++restart) {
    // Arnoldi expansion with one pass of reorthogonalization.
    for (int j = active; j < size; ++j) {
      Cvec w = apply_complex(op, v.col(j));
      Cvec coeff = v.leftCols(j + 1).adjoint() * w;
      w -= v.leftCols(j + 1) * coeff;
      const Cvec again = v.leftCols(j + 1).adjoint() * w;
      w -= v.leftCols(j + 1) * again;
      coeff += again;
      h.block(0, j, j + 1, 1) = coeff;
      const double beta = w.norm();
      h(j + 1, j) = beta;
      if (beta <= 1e-13 * std::max(1.0, coeff.norm())) {
        // Invariant subspace: the spectrum of h(0:j+1) is exact.
        size = j + 1;
        h(j + 1, j) = 0.0;
        break;
      }
      v.col(j + 1) = w / beta;
    }

    Eigen::ComplexSchur<Cmat> schur(h.topLeftCorner(size, size));
    t = schur.matrixT();
    q = schur.matrixU();
    sort_schur(t, q);
    const Eigen::RowVectorXcd b = h(size, size - 1) * q.row(size - 1);

    const int want = std::min(k, size);
    bool done = true;
    for (int i = 0; i < want; ++i) {
      const double scale = std::max(std::abs(t(i, i)), 1e-8);
      if (std::abs(b[i]) > options.tolerance * scale) done = false;
    }
    if (size < m) done = true;  // exact invariant subspace
    out.restarts = restart;
    if (done || restart >= options.max_restarts) {
      out.converged = done;
      break;
    }

    // Truncate to the leading Schur vectors and restart.
    const int keep = std::min(size - 1, std::max(k + (size - k) / 2, k + 1));
    const Cmat vq = v.leftCols(size) * q.leftCols(keep);
    const Cvec next = v.col(size);
    v.leftCols(keep) = vq;
    v.col(keep) = next;
    h.setZero();
    h.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep);
    h.block(keep, 0, 1, keep) = b.leftCols(keep);
    active = keep;
    size = m;
  }

  const int want = std::min<int>(k, size);
  const Cmat y = triangular_eigenvectors(t, want);
  const Cmat x = v.leftCols(size) * q.leftCols(want) * y;
  out.values = t.diagonal().head(want);
  out.vectors.resize(n, want);
  out.residuals.resize(want);
  for (int i = 0; i < want; ++i) {
    const Cvec xi = x.col(i).normalized();
    out.vectors.col(i) = xi;
    out.residuals[i] = (apply_complex(op, xi) - out.values[i] * xi).norm();
  }
  return out;
}

GmresResult gmres(const LinearOperator& op, const Eigen::VectorXd& b, double tolerance, int restart,
                  int max_iterations) {
  const Eigen::Index n = b.size();
  GmresResult out;
  out.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  restart = static_cast<int>(std::min<Eigen::Index>(restart, n));
  Eigen::VectorXd r = b;
  while (out.iterations < max_iterations) {
    const double beta = r.norm();
    out.relative_residual = beta / bnorm;
    if (out.relative_residual <= tolerance) {
      out.converged = true;
      return out;
    }
    Eigen::MatrixXd v(n, restart + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(restart + 1, restart);
    std::vector<double> cs(static_cast<std::size_t>(restart)), sn(cs.size());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(restart + 1);
    g[0] = beta;
    v.col(0) = r / beta;
    int j = 0;
    for (; j < restart && out.iterations < max_iterations; ++j) {
      ++out.iterations;
      Eigen::VectorXd w = op(v.col(j));
      for (int i = 0; i <= j; ++i) {
        h(i, j) = v.col(i).dot(w);
        w -= h(i, j) * v.col(i);
      }
      h(j + 1, j) = w.norm();
      if (h(j + 1, j) > 0.0) v.col(j + 1) = w / h(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double a = h(i, j), c = h(i + 1, j);
        h(i, j) = cs[ui] * a + sn[ui] * c;
        h(i + 1, j) = -sn[ui] * a + cs[ui] * c;
      }
      const auto uj = static_cast<std::size_t>(j);
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      cs[uj] = denom > 0.0 ? h(j, j) / denom : 1.0;
      sn[uj] = denom > 0.0 ? h(j + 1, j) / denom : 0.0;
      h(j, j) = denom;
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[uj] * g[j];
      g[j] = cs[uj] * g[j];
      if (std::abs(g[j + 1]) / bnorm <= tolerance || denom == 0.0) {
        ++j;
        break;
      }
    }
    const Eigen::VectorXd y =
        h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    out.x += v.leftCols(j) * y;
    r = b - op(out.x);
  }
  out.relative_residual = r.norm() / bnorm;
  out.converged = out.relative_residual <= tolerance;
  return out;
}

}  // namespace twave
