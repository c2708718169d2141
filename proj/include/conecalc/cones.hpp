#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conecalc/choi.hpp"
#include "conecalc/matrix.hpp"
#include "conecalc/verdict.hpp"

namespace conecalc {

enum class ConeTag { PSD, PPT, BlockPos, SchmidtBP, Sep, CP, CoCP, KPos, KSP, PosMaps };

// A named cone. `k` is meaningful for SchmidtBP, KPos and KSP only.
// Matrix tags and map tags are interchangeable through the Choi matrix:
// PSD ~ CP, PPT ~ CoCP, BlockPos ~ PosMaps, SchmidtBP(k) ~ KPos(k),
// Sep ~ KSP(1).
struct ConeId {
  ConeTag tag = ConeTag::PSD;
  int k = 1;

  /// Accepts psd, ppt, blockpos, sep, cp, cocp, posmaps, kpos:k, ksp:k,
  /// schmidtbp:k. Throws UnknownCone.
  static ConeId parse(std::string_view text);
  std::string name() const;
  bool has_level() const;
  bool operator==(const ConeId&) const = default;
};

// Finitely generated cone of Hermitian dim x dim matrices.
class GenCone {
 public:
  GenCone() = default;
  /// Throws NonHermitian for a non-Hermitian generator and DimMismatch for
  /// a zero or wrongly sized one.
  GenCone(int dim, std::vector<CMat> gens);

  int dim() const { return dim_; }
  const std::vector<CMat>& gens() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }

 private:
  int dim_ = 0;
  std::vector<CMat> gens_;
};

/// Symmetrises a query; throws NonHermitian when the asymmetry exceeds
/// hermitian_tol * max(1, ||X||_F).
CMat prepare_query(const CMat& x, double hermitian_tol = kHermitianTol);

Verdict is_psd(const CMat& x, double tol = kDecisionMargin);
Verdict is_ppt(const CMat& x, Dims dims, double tol = kDecisionMargin);

struct ProductMin {
  double value = 0.0;
  CVec v;
  CVec w;
  Evidence evidence;
};

struct SchmidtMin {
  double value = 0.0;
  CVec z;  // unit, Schmidt rank <= k
  Evidence evidence;
};

/// Heuristic minimum of (v (x) w)* X (v (x) w) over unit v, w by alternating
/// minimal-eigenvector steps with seeded restarts.
ProductMin min_product_value(const CMat& x, Dims dims, const SearchOptions& opts = {});

/// Heuristic minimum of z* X z over unit z of Schmidt rank <= k. Restart 0
/// starts from the Schmidt truncation of the global minimal eigenvector;
/// each iteration alternates exact minimisation over one factor block with
/// the other held orthonormal. k >= min(dims) returns the exact minimum
/// eigenvalue. Throws BadK.
SchmidtMin min_schmidt_value(const CMat& x, Dims dims, int k, const SearchOptions& opts = {});

Verdict is_block_positive(const CMat& x, Dims dims, const OracleOptions& opts = {});
/// Nonnegativity on Schmidt-rank <= k vectors (k = 1 is block positivity).
Verdict is_k_block_positive(const CMat& x, Dims dims, int k, const OracleOptions& opts = {});
Verdict is_separable(const CMat& x, Dims dims, const OracleOptions& opts = {});
/// Membership in the cone generated by Schmidt-rank <= k projectors.
Verdict is_schmidt_number_at_most(const CMat& x, Dims dims, int k,
                                  const OracleOptions& opts = {});

Verdict is_k_positive(const LinMap& phi, int k, const OracleOptions& opts = {});
Verdict is_ksp(const LinMap& phi, int k, const OracleOptions& opts = {});

/// Exact membership in a finitely generated cone. NotMember carries the
/// normalised residual direction W: Tr(W G_i) >= 0 for all generators and
/// Tr(W X) < 0. Throws EmptyCone.
Verdict nnls_membership(const GenCone& cone, const CMat& x, double tol = kDecisionMargin);

/// Membership of psi in the dual of the cone generated by `gens`.
Verdict dual_pairing_test(const std::vector<LinMap>& gens, const LinMap& psi,
                          double margin = kDecisionMargin);

/// Looks for P >= 0 with (X - P)^Gamma >= 0 by alternating projections.
std::optional<CMat> find_decomposition(const CMat& x, Dims dims, double margin,
                                       int max_iter = 2000);

Verdict check_matrix(const ConeId& cone, const CMat& x, Dims dims, const OracleOptions& opts = {});
Verdict check_map(const ConeId& cone, const LinMap& phi, const OracleOptions& opts = {});

}  // namespace conecalc
