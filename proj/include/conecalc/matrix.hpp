#pragma once

#include <complex>

#include <Eigen/Dense>

#include "conecalc/rng.hpp"

namespace conecalc {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigTol = 1e-10;
inline constexpr double kDecisionMargin = 1e-9;

// Factor sizes of a bipartite matrix in M_first (x) M_second. Basis
// ordering is lexicographic: e_i (x) e_j sits at index i * second + j.
struct Dims {
  int first = 0;
  int second = 0;

  int total() const { return first * second; }
  bool operator==(const Dims&) const = default;
};

enum class Side { First, Second };

struct EigResult {
  RVec values;   // ascending
  CMat vectors;  // orthonormal columns, matching order
};

struct SvdResult {
  CMat u;    // left singular vectors (columns)
  RVec s;    // descending, strictly positive
  CMat v;    // right singular vectors (columns)
};

/// Largest |X(i,j) - conj(X(j,i))|.
double hermitian_defect(const CMat& x);
bool is_hermitian(const CMat& x, double tol = kHermitianTol);
CMat hermitian_part(const CMat& x);

/// Full spectral decomposition of a Hermitian matrix by cyclic complex
/// Jacobi rotations. Deterministic for a fixed input. Throws NonSquare or
/// NonHermitian (checked against `hermitian_tol`, absolute).
EigResult herm_eig(const CMat& x, double hermitian_tol = kHermitianTol);
double min_eigenvalue(const CMat& x, double hermitian_tol = kHermitianTol);

/// Thin SVD keeping singular values above `cutoff`, computed from the
/// Hermitian dilation [[0, X], [X*, 0]].
SvdResult svd(const CMat& x, double cutoff = 1e-13);

CMat kron(const CMat& a, const CMat& b);
CMat identity(int n);

/// E = sum_ij e_i e_j* (x) e_i e_j* (unnormalised maximally entangled).
CMat max_entangled(int n);
/// F with F(v (x) w) = w (x) v.
CMat swap_operator(int n);

CMat partial_transpose(const CMat& x, Dims dims, Side side = Side::Second);

/// Column stacking, leftmost column first.
CVec vec(const CMat& x);
CMat unvec(const CVec& v, int rows, int cols);

/// Tr(XY).
Complex trace_pairing(const CMat& x, const CMat& y);
/// Re Tr(XY), the real pairing on Hermitian matrices.
double real_pairing(const CMat& x, const CMat& y);

CMat outer(const CVec& v);

/// (Ad_A (x) id_n)(X) = (A* (x) I_n) X (A (x) I_n) for A of size p x q,
/// mapping M_p (x) M_n to M_q (x) M_n.
CMat ad_first(const CMat& a, const CMat& x, int n);
/// (id_m (x) Ad_B)(X) = (I_m (x) B*) X (I_m (x) B).
CMat ad_second(const CMat& b, const CMat& x, int m);

/// Schmidt coefficients of z in C^first (x) C^second, descending.
RVec schmidt_coefficients(const CVec& z, Dims dims);
/// Best Schmidt-rank-k approximation of z (unnormalised).
CVec schmidt_truncate(const CVec& z, Dims dims, int k);

// Random ensembles.
CMat random_gaussian(int rows, int cols, Rng& rng);
CVec random_unit_vector(int n, Rng& rng);
CMat random_hermitian(int n, Rng& rng);
/// rows x cols with orthonormal columns (rows >= cols).
CMat random_isometry(int rows, int cols, Rng& rng);

/// Orthonormalise columns in place order; degenerate columns are replaced
/// by the first standard basis vectors that complete the set.
CMat orthonormalize_columns(const CMat& x);

}  // namespace conecalc
