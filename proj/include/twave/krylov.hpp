#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace twave {

/// Matrix-free action of a real linear operator.
using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Dense matrix assembled column by column from an operator.
Eigen::MatrixXd assemble(const LinearOperator& op, Eigen::Index dimension);

struct EigenResult {
  Eigen::VectorXcd values;     // descending modulus
  Eigen::MatrixXcd vectors;    // unit columns matching values
  Eigen::VectorXd residuals;   // ||A v - lambda v|| / ||v||
  bool converged = true;
  int restarts = 0;
  std::string method;
};

/// Largest-modulus eigenpairs of a dense real matrix.
EigenResult dense_eigen(const Eigen::MatrixXd& a, int k);

struct KrylovSchurOptions {
  int subspace = 0;  // 0 picks max(2k + 1, k + 20)
  int max_restarts = 300;
  double tolerance = 1e-10;
};

/// Largest-modulus eigenpairs by restarted Krylov-Schur in complex arithmetic.
/// On non-convergence the partial result is returned with converged = false.
EigenResult krylov_schur(const LinearOperator& op, Eigen::Index dimension, int k,
                         const KrylovSchurOptions& options = {});

/// Swaps diagonal entries i and i+1 of an upper-triangular T with a unitary
/// rotation, T <- G^* T G, Q <- Q G.
void swap_schur_pair(Eigen::MatrixXcd& t, Eigen::MatrixXcd& q, Eigen::Index i);

struct GmresResult {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt Arnoldi, x0 = 0.
GmresResult gmres(const LinearOperator& op, const Eigen::VectorXd& b, double tolerance,
                  int restart = 60, int max_iterations = 2000);

}  // namespace twave
