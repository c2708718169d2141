#pragma once

#include "conecalc/choi.hpp"
#include "conecalc/cones.hpp"
#include "conecalc/matrix.hpp"
#include "conecalc/rng.hpp"

namespace conecalc {

// Random elements of the named cones. Every sample is a member by
// construction. PosMaps/BlockPos are sampled as decomposable elements
// (CP + CoCP), which is the whole cone only for n = 2 (matrices: dims with
// first * second <= 6); larger sizes throw Unsupported unless the caller
// accepts the decomposable subcone.
LinMap sample_map(const ConeId& cone, int n, Rng& rng, bool allow_subcone = false);
CMat sample_matrix(const ConeId& cone, Dims dims, Rng& rng, bool allow_subcone = false);

/// Sum of r Ad maps with Gaussian A; r uniform in 1..n^2.
LinMap random_cp_map(int n, Rng& rng);
/// Ad_A o Phi_lambda o Ad_B with lambda uniform in [0, 1/k].
LinMap random_reduction_orbit(int n, int k, Rng& rng);
/// Arbitrary linear map with Gaussian Choi matrix.
LinMap random_map(int n, Rng& rng);
/// Hermiticity-preserving map with Gaussian Hermitian Choi matrix.
LinMap random_hermitian_map(int n, Rng& rng);

/// Unit vector of Schmidt rank <= k in C^first (x) C^second.
CVec random_schmidt_vector(Dims dims, int k, Rng& rng);

/// PSD matrix with spectrum uniform in [lo, hi] and Haar-like eigenbasis.
CMat random_psd_with_spectrum(int n, double lo, double hi, Rng& rng);
/// Hermitian matrix whose smallest eigenvalue lies in [-hi, -lo].
CMat random_indefinite(int n, double lo, double hi, Rng& rng);

}  // namespace conecalc
