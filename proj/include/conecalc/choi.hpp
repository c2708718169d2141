#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "conecalc/matrix.hpp"

namespace conecalc {

// One term A X B* of a generalised Kraus expansion.
struct KrausPair {
  CMat a;
  CMat b;
};

// A linear map on M_n, stored as its Choi matrix C = (id (x) Phi)(E).
// A Kraus list, when present, is a cache that was checked against the
// Choi matrix at construction. Immutable.
class LinMap {
 public:
  /// Throws NonSquare / DimMismatch unless `choi` is n^2 x n^2.
  static LinMap from_choi(CMat choi);
  /// Builds the Choi matrix from the pairs and verifies it against the
  /// action on matrix units to `tol`.
  static LinMap from_kraus(std::vector<KrausPair> pairs, double tol = 1e-10);

  int dim() const { return n_; }
  const CMat& choi() const { return choi_; }
  const std::optional<std::vector<KrausPair>>& kraus() const { return kraus_; }
  bool hermiticity_preserving() const { return hermitian_; }

  LinMap operator+(const LinMap& other) const;
  LinMap operator*(double scale) const;

 private:
  LinMap(CMat choi, std::optional<std::vector<KrausPair>> kraus);

  int n_ = 0;
  CMat choi_;
  std::optional<std::vector<KrausPair>> kraus_;
  bool hermitian_ = false;
};

using Action = std::function<CMat(const CMat&)>;

/// Choi matrix by basis expansion: sum_ij e_i e_j* (x) action(e_i e_j*).
/// The action is probed for linearity first (NonLinearAction).
LinMap choi_from_action(int n, const Action& action);

/// Ad_A(X) = A* X A.
LinMap ad_map(const CMat& a);

/// Generalised Kraus pairs reproducing the map: A_i = B_i from the
/// spectral decomposition when the Choi matrix is PSD, otherwise paired
/// factors from its SVD.
std::vector<KrausPair> kraus_from_choi(const LinMap& phi);

CMat apply(const LinMap& phi, const CMat& x);
/// (id_m (x) Phi)(X) for X in M_m (x) M_n.
CMat apply_amplified(int m, const LinMap& phi, const CMat& x);
/// (Phi (x) id_m)(X) for X in M_n (x) M_m.
CMat apply_amplified_left(const LinMap& phi, int m, const CMat& x);

/// outer o inner, with C = (id (x) outer)(C_inner).
LinMap compose(const LinMap& outer, const LinMap& inner);
/// Hilbert-Schmidt adjoint; Choi matrix F C^T F.
LinMap adjoint(const LinMap& phi);
/// T o Phi o T; Choi matrix C^T.
LinMap transpose_twirl(const LinMap& phi);

struct FlipIdentityReport {
  double gap = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Compares (id (x) Phi)(E) with ((T o Phi^dagger o T) (x) id)(E), the right
/// side assembled from adjoint, transpose_twirl and left amplification.
FlipIdentityReport verify_flip_identity(const LinMap& phi, double tol = 1e-10);

// Named maps used throughout tests and suites.
LinMap identity_map(int n);
LinMap transpose_map(int n);
/// X -> Tr(X) I.
LinMap trace_map(int n);
/// X -> Tr(X) I - lambda X; k-positive exactly when lambda <= 1/k.
LinMap reduction_map(int n, double lambda);

}  // namespace conecalc
