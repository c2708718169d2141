#include "conecalc/choi.hpp"

#include <cmath>

#include "conecalc/error.hpp"

namespace conecalc {
namespace {

int infer_dim(const CMat& choi) {
  if (choi.rows() != choi.cols()) {
    throw Error(ErrorCode::NonSquare, "Choi matrix must be square");
  }
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(choi.rows()))));
  if (n < 1 || n * n != choi.rows()) {
    throw Error(ErrorCode::DimMismatch,
                "Choi matrix size " + std::to_string(choi.rows()) + " is not a perfect square");
  }
  return n;
}

CMat matrix_unit(int n, int i, int j) {
  CMat e = CMat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

CMat kraus_action(const std::vector<KrausPair>& pairs, const CMat& x) {
  CMat out = CMat::Zero(x.rows(), x.cols());
  for (const auto& p : pairs) out += p.a * x * p.b.adjoint();
  return out;
}

void require_same_dim(const LinMap& a, const LinMap& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": maps act on M_" +
                                            std::to_string(a.dim()) + " and M_" +
                                            std::to_string(b.dim()));
  }
}

constexpr std::size_t kMaxCachedPairs = 32;

}  // namespace

LinMap::LinMap(CMat choi, std::optional<std::vector<KrausPair>> kraus)
    : n_(infer_dim(choi)), choi_(std::move(choi)), kraus_(std::move(kraus)) {
  hermitian_ = hermitian_defect(choi_) <= kHermitianTol * std::max(1.0, choi_.norm());
}

LinMap LinMap::from_choi(CMat choi) { return LinMap(std::move(choi), std::nullopt); }

LinMap LinMap::from_kraus(std::vector<KrausPair> pairs, double tol) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyCone, "from_kraus: no Kraus pairs");
  const auto n = static_cast<int>(pairs.front().a.rows());
  for (const auto& p : pairs) {
    if (p.a.rows() != n || p.a.cols() != n || p.b.rows() != n || p.b.cols() != n) {
      throw Error(ErrorCode::DimMismatch, "from_kraus: all Kraus operators must be n x n");
    }
  }
  CMat choi = CMat::Zero(n * n, n * n);
  for (const auto& p : pairs) choi += vec(p.a) * vec(p.b).adjoint();

  // Invariant: the vec-formula agrees with the action on matrix units.
  double gap = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const CMat block = kraus_action(pairs, matrix_unit(n, i, j));
      gap = std::max(gap, (choi.block(i * n, j * n, n, n) - block).norm());
    }
  }
  if (gap > tol * std::max(1.0, choi.norm())) {
    throw Error(ErrorCode::DimMismatch, "from_kraus: Choi/Kraus mismatch " + std::to_string(gap));
  }
  return LinMap(std::move(choi), std::move(pairs));
}

LinMap LinMap::operator+(const LinMap& other) const {
  require_same_dim(*this, other, "LinMap::operator+");
  std::optional<std::vector<KrausPair>> pairs;
  if (kraus_ && other.kraus_ && kraus_->size() + other.kraus_->size() <= kMaxCachedPairs) {
    pairs = *kraus_;
    pairs->insert(pairs->end(), other.kraus_->begin(), other.kraus_->end());
  }
  return LinMap(choi_ + other.choi_, std::move(pairs));
}

LinMap LinMap::operator*(double scale) const {
  std::optional<std::vector<KrausPair>> pairs;
  if (kraus_) {
    pairs = *kraus_;
    for (auto& p : *pairs) p.a *= scale;
  }
  return LinMap(choi_ * scale, std::move(pairs));
}

LinMap choi_from_action(int n, const Action& action) {
  if (n < 1) throw Error(ErrorCode::DimMismatch, "choi_from_action: n must be positive");

  // Linearity probe on a fixed pseudo-random pair.
  Rng rng(0xC401, static_cast<std::uint64_t>(n));
  const CMat x = random_gaussian(n, n, rng);
  const CMat y = random_gaussian(n, n, rng);
  const Complex alpha = rng.complex_normal();
  const Complex beta = rng.complex_normal();
  const CMat fx = action(x);
  const CMat fy = action(y);
  const CMat fxy = action(alpha * x + beta * y);
  if (fx.rows() != n || fx.cols() != n || fxy.rows() != n || fxy.cols() != n) {
    throw Error(ErrorCode::DimMismatch, "choi_from_action: action must map M_n into M_n");
  }
  const double scale = std::max(1.0, std::abs(alpha) * fx.norm() + std::abs(beta) * fy.norm());
  if ((fxy - alpha * fx - beta * fy).norm() > 1e-9 * scale) {
    throw Error(ErrorCode::NonLinearAction, "action failed the linearity probe");
  }

  CMat choi(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) choi.block(i * n, j * n, n, n) = action(matrix_unit(n, i, j));
  }
  return LinMap::from_choi(std::move(choi));
}

LinMap ad_map(const CMat& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::NonSquare, "ad_map expects a square matrix");
  const CMat as = a.adjoint();
  return LinMap::from_kraus({KrausPair{as, as}});
}

std::vector<KrausPair> kraus_from_choi(const LinMap& phi) {
  if (phi.kraus()) return *phi.kraus();
  const int n = phi.dim();
  const CMat& c = phi.choi();
  std::vector<KrausPair> pairs;

  const double scale = std::max(1.0, c.norm());
  if (phi.hermiticity_preserving()) {
    const EigResult eig = herm_eig(hermitian_part(c), std::numeric_limits<double>::infinity());
    if (eig.values(0) >= -kEigTol * scale) {
      for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
        if (eig.values(k) <= 1e-14 * scale) break;
        const CMat a = std::sqrt(eig.values(k)) * unvec(eig.vectors.col(k), n, n);
        pairs.push_back({a, a});
      }
      if (pairs.empty()) pairs.push_back({CMat::Zero(n, n), CMat::Zero(n, n)});
      return pairs;
    }
  }
  const SvdResult parts = svd(c, 1e-14);
  for (Eigen::Index k = 0; k < parts.s.size(); ++k) {
    const double root = std::sqrt(parts.s(k));
    pairs.push_back({root * unvec(parts.u.col(k), n, n), root * unvec(parts.v.col(k), n, n)});
  }
  if (pairs.empty()) pairs.push_back({CMat::Zero(n, n), CMat::Zero(n, n)});
  return pairs;
}

CMat apply(const LinMap& phi, const CMat& x) {
  const int n = phi.dim();
  if (x.rows() != n || x.cols() != n) {
    throw Error(ErrorCode::DimMismatch, "apply: input must be " + std::to_string(n) + "x" +
                                            std::to_string(n));
  }
  if (phi.kraus()) return kraus_action(*phi.kraus(), x);
  CMat out = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (x(a, b) != Complex(0.0)) out += x(a, b) * phi.choi().block(a * n, b * n, n, n);
    }
  }
  return out;
}

CMat apply_amplified(int m, const LinMap& phi, const CMat& x) {
  const int n = phi.dim();
  if (x.rows() != m * n || x.cols() != m * n) {
    throw Error(ErrorCode::DimMismatch, "apply_amplified: input must be (m n) x (m n)");
  }
  CMat out(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out.block(i * n, j * n, n, n) = conecalc::apply(phi, x.block(i * n, j * n, n, n));
    }
  }
  return out;
}

CMat apply_amplified_left(const LinMap& phi, int m, const CMat& x) {
  const int n = phi.dim();
  if (x.rows() != n * m || x.cols() != n * m) {
    throw Error(ErrorCode::DimMismatch, "apply_amplified_left: input must be (n m) x (n m)");
  }
  // out[(a,r),(b,s)] = sum_cd Phi(e_c e_d*)(a,b) X[(c,r),(d,s)]
  CMat out = CMat::Zero(n * m, n * m);
  for (int c = 0; c < n; ++c) {
    for (int d = 0; d < n; ++d) {
      const CMat image = conecalc::apply(phi, matrix_unit(n, c, d));
      const CMat slice = x.block(c * m, d * m, m, m);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (image(a, b) != Complex(0.0)) out.block(a * m, b * m, m, m) += image(a, b) * slice;
        }
      }
    }
  }
  return out;
}

LinMap compose(const LinMap& outer, const LinMap& inner) {
  require_same_dim(outer, inner, "compose");
  const int n = outer.dim();
  CMat choi = apply_amplified(n, outer, inner.choi());
  if (outer.kraus() && inner.kraus() &&
      outer.kraus()->size() * inner.kraus()->size() <= kMaxCachedPairs) {
    std::vector<KrausPair> pairs;
    for (const auto& p : *outer.kraus()) {
      for (const auto& q : *inner.kraus()) pairs.push_back({p.a * q.a, p.b * q.b});
    }
    return LinMap::from_kraus(std::move(pairs));
  }
  return LinMap::from_choi(std::move(choi));
}

LinMap adjoint(const LinMap& phi) {
  if (phi.kraus()) {
    std::vector<KrausPair> pairs;
    for (const auto& p : *phi.kraus()) pairs.push_back({p.b.adjoint(), p.a.adjoint()});
    return LinMap::from_kraus(std::move(pairs));
  }
  const CMat f = swap_operator(phi.dim());
  return LinMap::from_choi(f * phi.choi().transpose() * f);
}

LinMap transpose_twirl(const LinMap& phi) {
  if (phi.kraus()) {
    std::vector<KrausPair> pairs;
    for (const auto& p : *phi.kraus()) pairs.push_back({p.b.conjugate(), p.a.conjugate()});
    return LinMap::from_kraus(std::move(pairs));
  }
  return LinMap::from_choi(phi.choi().transpose());
}

FlipIdentityReport verify_flip_identity(const LinMap& phi, double tol) {
  const int n = phi.dim();
  const CMat e = max_entangled(n);
  const CMat left = apply_amplified(n, phi, e);
  const LinMap twisted = transpose_twirl(adjoint(phi));
  const CMat right = apply_amplified_left(twisted, n, e);
  FlipIdentityReport report;
  report.gap = (left - right).norm();
  report.threshold = tol * std::max(1.0, phi.choi().norm());
  report.passed = report.gap <= report.threshold;
  return report;
}

LinMap identity_map(int n) { return ad_map(identity(n)); }

LinMap transpose_map(int n) { return LinMap::from_choi(swap_operator(n)); }

LinMap trace_map(int n) { return LinMap::from_choi(CMat::Identity(n * n, n * n)); }

LinMap reduction_map(int n, double lambda) {
  return LinMap::from_choi(CMat::Identity(n * n, n * n) - lambda * max_entangled(n));
}

}  // namespace conecalc
