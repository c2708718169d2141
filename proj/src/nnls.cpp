#include "conecalc/nnls.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "conecalc/error.hpp"

namespace conecalc {

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double dual_tol,
                int max_iter) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (b.size() != rows) throw Error(ErrorCode::DimMismatch, "nnls: rhs length mismatch");
  if (max_iter <= 0) max_iter = static_cast<int>(3 * cols + 3 * rows + 30);

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(cols);
  std::vector<char> passive(cols, 0);
  std::vector<char> blocked(cols, 0);
  const double scale = std::max(1.0, b.norm());
  const double tol = dual_tol * scale;

  Eigen::VectorXd residual = b;
  Eigen::VectorXd dual = a.transpose() * residual;

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(rows, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(k) = a.col(idx[k]);
    const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(b);
    z = Eigen::VectorXd::Zero(cols);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = sol(k);
  };

  while (out.iterations < max_iter) {
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!passive[j] && !blocked[j] && dual(j) > best_val) {
        best_val = dual(j);
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    ++out.iterations;
    passive[best] = 1;

    Eigen::VectorXd z;
    bool first = true;
    for (int inner = 0; inner < 3 * static_cast<int>(cols) + 10; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[j] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) {
        out.x = z;
        break;
      }
      if (first && z(best) <= 0.0) {
        // Degenerate entry: the new column does not help; keep it out of
        // the candidate list until the iterate moves.
        passive[best] = 0;
        blocked[best] = 1;
        break;
      }
      first = false;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[j] && z(j) <= 0.0) {
          alpha = std::min(alpha, out.x(j) / (out.x(j) - z(j)));
        }
      }
      out.x += alpha * (z - out.x);
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[j] && out.x(j) <= 1e-15 * scale) {
          passive[j] = 0;
          out.x(j) = 0.0;
        }
      }
    }
    if (!blocked[best]) std::fill(blocked.begin(), blocked.end(), 0);
    residual = b - a * out.x;
    dual = a.transpose() * residual;
  }
  out.residual = (b - a * out.x).norm();
  return out;
}

Eigen::VectorXd realify(const CMat& h) {
  const auto d = static_cast<int>(h.rows());
  Eigen::VectorXd v(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) v(k++) = h(i, i).real();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      v(k++) = std::numbers::sqrt2 * h(i, j).real();
      v(k++) = std::numbers::sqrt2 * h(i, j).imag();
    }
  }
  return v;
}

CMat unrealify(const Eigen::VectorXd& v, int dim) {
  if (v.size() != dim * dim) throw Error(ErrorCode::DimMismatch, "unrealify: length mismatch");
  CMat h(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) h(i, i) = v(k++);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double re = v(k++) / std::numbers::sqrt2;
      const double im = v(k++) / std::numbers::sqrt2;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

}  // namespace conecalc
