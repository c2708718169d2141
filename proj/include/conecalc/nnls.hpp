#pragma once

#include <Eigen/Dense>

#include "conecalc/matrix.hpp"

namespace conecalc {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||_2
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
/// On return the dual vector A^T (b - A x) is <= `dual_tol` everywhere,
/// which is what makes the residual direction a separating functional.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double dual_tol = 1e-13,
                int max_iter = 0);

/// Isometric real coordinates of a Hermitian matrix: diagonal entries, then
/// sqrt(2) Re and sqrt(2) Im of the strict upper triangle, so that
/// realify(X).dot(realify(Y)) == Re Tr(XY).
Eigen::VectorXd realify(const CMat& h);
CMat unrealify(const Eigen::VectorXd& v, int dim);

}  // namespace conecalc
