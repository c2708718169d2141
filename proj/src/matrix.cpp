#include "conecalc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "conecalc/error.hpp"

namespace conecalc {
namespace {

void require_square(const CMat& x, const char* what) {
  if (x.rows() != x.cols()) {
    throw Error(ErrorCode::NonSquare, std::string(what) + " expects a square matrix, got " +
                                          std::to_string(x.rows()) + "x" +
                                          std::to_string(x.cols()));
  }
}

// Rotate columns p, q of `m` by the 2x2 unitary [[u00, u01], [u10, u11]].
void rotate_columns(CMat& m, int p, int q, Complex u00, Complex u01, Complex u10, Complex u11) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Complex mp = m(r, p);
    const Complex mq = m(r, q);
    m(r, p) = mp * u00 + mq * u10;
    m(r, q) = mp * u01 + mq * u11;
  }
}

void rotate_rows_adjoint(CMat& m, int p, int q, Complex u00, Complex u01, Complex u10,
                         Complex u11) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Complex mp = m(p, c);
    const Complex mq = m(q, c);
    m(p, c) = std::conj(u00) * mp + std::conj(u10) * mq;
    m(q, c) = std::conj(u01) * mp + std::conj(u11) * mq;
  }
}

double off_diagonal_norm(const CMat& a) {
  double off = 0.0;
  for (Eigen::Index q = 0; q < a.cols(); ++q) {
    for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
  }
  return std::sqrt(2.0 * off);
}

CMat reshape_bipartite(const CVec& z, Dims dims) {
  CMat m(dims.first, dims.second);
  for (int a = 0; a < dims.first; ++a) {
    for (int r = 0; r < dims.second; ++r) m(a, r) = z(a * dims.second + r);
  }
  return m;
}

}  // namespace

double hermitian_defect(const CMat& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i; j < x.cols(); ++j) {
      worst = std::max(worst, std::abs(x(i, j) - std::conj(x(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const CMat& x, double tol) { return hermitian_defect(x) <= tol; }

CMat hermitian_part(const CMat& x) { return (x + x.adjoint()) * 0.5; }

EigResult herm_eig(const CMat& x, double hermitian_tol) {
  require_square(x, "herm_eig");
  const double defect = hermitian_defect(x);
  if (defect > hermitian_tol) {
    throw Error(ErrorCode::NonHermitian,
                "asymmetry " + std::to_string(defect) + " exceeds tolerance");
  }
  const int n = static_cast<int>(x.rows());
  CMat a = hermitian_part(x);
  CMat v = CMat::Identity(n, n);
  const double scale = a.norm();
  const double floor = std::numeric_limits<double>::epsilon() * scale;

  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    if (off_diagonal_norm(a) <= 0.1 * floor) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex g = a(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-3 * floor) continue;
        const Complex phase = std::conj(g / ag);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * ag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
        const Complex u00 = c;
        const Complex u01 = s;
        const Complex u10 = -s * phase;
        const Complex u11 = c * phase;
        rotate_columns(a, p, q, u00, u01, u10, u11);
        rotate_rows_adjoint(a, p, q, u00, u01, u10, u11);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, u00, u01, u10, u11);
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigResult out{RVec(n), CMat(n, n)};
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    CVec col = v.col(order[k]);
    // Fix the phase: largest-magnitude component real and positive.
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (std::abs(col(arg)) > 0.0) col *= std::conj(col(arg)) / std::abs(col(arg));
    out.vectors.col(k) = col;
  }
  return out;
}

double min_eigenvalue(const CMat& x, double hermitian_tol) {
  return herm_eig(x, hermitian_tol).values(0);
}

SvdResult svd(const CMat& x, double cutoff) {
  const auto r = static_cast<int>(x.rows());
  const auto c = static_cast<int>(x.cols());
  CMat dilation = CMat::Zero(r + c, r + c);
  dilation.topRightCorner(r, c) = x;
  dilation.bottomLeftCorner(c, r) = x.adjoint();
  const EigResult eig = herm_eig(dilation, std::numeric_limits<double>::infinity());
  const double largest = std::max(std::abs(eig.values(0)), std::abs(eig.values(r + c - 1)));
  const double keep = cutoff * std::max(1.0, largest);

  std::vector<int> picked;
  for (int k = r + c - 1; k >= 0 && eig.values(k) > keep; --k) picked.push_back(k);

  SvdResult out{CMat(r, picked.size()), RVec(picked.size()), CMat(c, picked.size())};
  for (std::size_t j = 0; j < picked.size(); ++j) {
    const CVec col = eig.vectors.col(picked[j]);
    out.s(j) = eig.values(picked[j]);
    CVec u = col.head(r);
    CVec v = col.tail(c);
    out.u.col(j) = u / u.norm();
    out.v.col(j) = v / v.norm();
  }
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat identity(int n) { return CMat::Identity(n, n); }

CMat max_entangled(int n) {
  CMat e = CMat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) e(i * n + i, j * n + j) = 1.0;
  }
  return e;
}

CMat swap_operator(int n) {
  CMat f = CMat::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) f(b * n + a, a * n + b) = 1.0;
  }
  return f;
}

CMat partial_transpose(const CMat& x, Dims dims, Side side) {
  const int m = dims.first;
  const int n = dims.second;
  if (x.rows() != m * n || x.cols() != m * n) {
    throw Error(ErrorCode::DimMismatch, "partial_transpose: matrix is " +
                                            std::to_string(x.rows()) + "x" +
                                            std::to_string(x.cols()) + ", dims give " +
                                            std::to_string(m * n));
  }
  CMat y(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          y(i * n + a, j * n + b) =
              side == Side::Second ? x(i * n + b, j * n + a) : x(j * n + a, i * n + b);
        }
      }
    }
  }
  return y;
}

CVec vec(const CMat& x) {
  CVec v(x.size());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) v(j * x.rows() + i) = x(i, j);
  }
  return v;
}

CMat unvec(const CVec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw Error(ErrorCode::DimMismatch, "unvec: vector of length " + std::to_string(v.size()) +
                                            " cannot fill " + std::to_string(rows) + "x" +
                                            std::to_string(cols));
  }
  CMat x(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) x(i, j) = v(j * rows + i);
  }
  return x;
}

Complex trace_pairing(const CMat& x, const CMat& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
    throw Error(ErrorCode::DimMismatch, "trace_pairing: incompatible sizes");
  }
  // Tr(XY) = sum_ij X(i,j) Y(j,i), accumulated in fixed order.
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) acc += x(i, j) * y(j, i);
  }
  return acc;
}

double real_pairing(const CMat& x, const CMat& y) { return trace_pairing(x, y).real(); }

CMat outer(const CVec& v) { return v * v.adjoint(); }

CMat ad_first(const CMat& a, const CMat& x, int n) {
  if (x.rows() != a.rows() * n || x.cols() != x.rows()) {
    throw Error(ErrorCode::DimMismatch, "ad_first: operand does not match A (x) I_n");
  }
  const CMat lift = kron(a, identity(n));
  return lift.adjoint() * x * lift;
}

CMat ad_second(const CMat& b, const CMat& x, int m) {
  if (x.rows() != m * b.rows() || x.cols() != x.rows()) {
    throw Error(ErrorCode::DimMismatch, "ad_second: operand does not match I_m (x) B");
  }
  const CMat lift = kron(identity(m), b);
  return lift.adjoint() * x * lift;
}

RVec schmidt_coefficients(const CVec& z, Dims dims) {
  if (z.size() != dims.total()) {
    throw Error(ErrorCode::DimMismatch, "schmidt_coefficients: vector length mismatch");
  }
  // Singular values directly, not square roots of Gram eigenvalues, so
  // vanishing coefficients come out at rounding level instead of its root.
  const SvdResult parts = svd(reshape_bipartite(z, dims), 0.0);
  RVec s = RVec::Zero(std::min(dims.first, dims.second));
  const Eigen::Index kept = std::min<Eigen::Index>(parts.s.size(), s.size());
  s.head(kept) = parts.s.head(kept);
  return s;
}

CVec schmidt_truncate(const CVec& z, Dims dims, int k) {
  const CMat m = reshape_bipartite(z, dims);
  const SvdResult parts = svd(m, 1e-15);
  CMat kept = CMat::Zero(dims.first, dims.second);
  for (Eigen::Index j = 0; j < std::min<Eigen::Index>(k, parts.s.size()); ++j) {
    kept += parts.s(j) * parts.u.col(j) * parts.v.col(j).adjoint();
  }
  CVec out(dims.total());
  for (int a = 0; a < dims.first; ++a) {
    for (int r = 0; r < dims.second; ++r) out(a * dims.second + r) = kept(a, r);
  }
  return out;
}

CMat random_gaussian(int rows, int cols, Rng& rng) {
  CMat g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

CVec random_unit_vector(int n, Rng& rng) {
  CVec v = random_gaussian(n, 1, rng).col(0);
  return v / v.norm();
}

CMat random_hermitian(int n, Rng& rng) { return hermitian_part(random_gaussian(n, n, rng)); }

CMat random_isometry(int rows, int cols, Rng& rng) {
  return orthonormalize_columns(random_gaussian(rows, cols, rng));
}

CMat orthonormalize_columns(const CMat& x) {
  const Eigen::Index rows = x.rows();
  CMat q(rows, x.cols());
  Eigen::Index next_basis = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    CVec col = x.col(j);
    const double scale = std::max(1.0, col.norm());
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) col -= q.col(i) * q.col(i).dot(col);
    }
    while (col.norm() <= 1e-12 * scale && next_basis < rows) {
      col = CVec::Unit(rows, next_basis++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) col -= q.col(i) * q.col(i).dot(col);
      }
    }
    q.col(j) = col / col.norm();
  }
  return q;
}

}  // namespace conecalc
