#include "conecalc/sampling.hpp"

#include <algorithm>

#include "conecalc/error.hpp"

namespace conecalc {

LinMap random_cp_map(int n, Rng& rng) {
  const int terms = rng.uniform_int(1, n * n);
  CMat c = CMat::Zero(n * n, n * n);
  for (int t = 0; t < terms; ++t) {
    const CVec v = vec(random_gaussian(n, n, rng)) / std::sqrt(static_cast<double>(n));
    c += v * v.adjoint();
  }
  return LinMap::from_choi(c / terms);
}

LinMap random_reduction_orbit(int n, int k, Rng& rng) {
  const double lambda = rng.uniform(0.0, 1.0 / k);
  const CMat a = random_gaussian(n, n, rng) / std::sqrt(static_cast<double>(n));
  const CMat b = random_gaussian(n, n, rng) / std::sqrt(static_cast<double>(n));
  return compose(ad_map(a), compose(reduction_map(n, lambda), ad_map(b)));
}

LinMap random_map(int n, Rng& rng) { return LinMap::from_choi(random_gaussian(n * n, n * n, rng)); }

LinMap random_hermitian_map(int n, Rng& rng) {
  return LinMap::from_choi(random_hermitian(n * n, rng));
}

CVec random_schmidt_vector(Dims dims, int k, Rng& rng) {
  CVec z = CVec::Zero(dims.total());
  for (int l = 0; l < k; ++l) {
    z += rng.uniform(0.1, 1.0) *
         kron(random_unit_vector(dims.first, rng), random_unit_vector(dims.second, rng));
  }
  return z.normalized();
}

CMat random_psd_with_spectrum(int n, double lo, double hi, Rng& rng) {
  const CMat u = random_isometry(n, n, rng);
  RVec d(n);
  for (int i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
  return hermitian_part(u * d.asDiagonal() * u.adjoint());
}

CMat random_indefinite(int n, double lo, double hi, Rng& rng) {
  const CMat u = random_isometry(n, n, rng);
  RVec d(n);
  d(0) = -rng.uniform(lo, hi);
  for (int i = 1; i < n; ++i) d(i) = rng.uniform(d(0), 1.0);
  return hermitian_part(u * d.asDiagonal() * u.adjoint());
}

namespace {

LinMap sample_ksp(int n, int k, Rng& rng) {
  const int terms = rng.uniform_int(1, n * n);
  CMat c = CMat::Zero(n * n, n * n);
  for (int t = 0; t < terms; ++t) {
    const CMat a = random_gaussian(n, k, rng) * random_gaussian(k, n, rng) / std::sqrt(double(n * k));
    const CVec v = vec(a);
    c += v * v.adjoint();
  }
  return LinMap::from_choi(c / terms);
}

LinMap sample_decomposable(int n, Rng& rng) {
  const double w = rng.uniform(0.1, 1.0);
  const LinMap cocp = compose(random_cp_map(n, rng), transpose_map(n));
  return random_cp_map(n, rng) * w + cocp * (1.0 - w);
}

LinMap sample_kpos(int n, int k, Rng& rng) {
  if (k >= n) return random_cp_map(n, rng);
  LinMap out = random_reduction_orbit(n, k, rng);
  if (rng.uniform() < 0.5) out = out + random_cp_map(n, rng) * rng.uniform(0.0, 1.0);
  return out;
}

CMat sample_psd(int d, Rng& rng) {
  const int r = rng.uniform_int(1, d);
  const CMat g = random_gaussian(d, r, rng);
  return hermitian_part(g * g.adjoint() / r);
}

}  // namespace

LinMap sample_map(const ConeId& cone, int n, Rng& rng, bool allow_subcone) {
  if (n < 1) throw Error(ErrorCode::DimMismatch, "n must be positive");
  if (cone.has_level() && (cone.k < 1 || cone.k > n)) throw Error(ErrorCode::BadK, "k must lie in 1..n");
  switch (cone.tag) {
    case ConeTag::PSD:
    case ConeTag::CP: return random_cp_map(n, rng);
    case ConeTag::PPT:
    case ConeTag::CoCP: return compose(random_cp_map(n, rng), transpose_map(n));
    case ConeTag::Sep: return sample_ksp(n, 1, rng);
    case ConeTag::KSP: return sample_ksp(n, cone.k, rng);
    case ConeTag::BlockPos:
    case ConeTag::PosMaps:
      if (n > 2 && !allow_subcone) {
        throw Error(ErrorCode::Unsupported, "positive maps are sampled exactly only for n = 2");
      }
      return sample_decomposable(n, rng);
    case ConeTag::SchmidtBP:
    case ConeTag::KPos: return sample_kpos(n, cone.k, rng);
  }
  throw Error(ErrorCode::UnknownCone, "unhandled cone tag");
}

CMat sample_matrix(const ConeId& cone, Dims dims, Rng& rng, bool allow_subcone) {
  const int d = dims.total();
  if (d < 1) throw Error(ErrorCode::DimMismatch, "dims must be positive");
  const bool square = dims.first == dims.second;
  switch (cone.tag) {
    case ConeTag::PSD:
    case ConeTag::CP: return sample_psd(d, rng);
    case ConeTag::PPT:
    case ConeTag::CoCP: return partial_transpose(sample_psd(d, rng), dims);
    case ConeTag::Sep:
    case ConeTag::KSP: {
      const int k = cone.tag == ConeTag::Sep ? 1 : cone.k;
      if (k < 1 || k > std::min(dims.first, dims.second)) throw Error(ErrorCode::BadK, "bad k");
      const int terms = rng.uniform_int(1, d);
      CMat x = CMat::Zero(d, d);
      for (int t = 0; t < terms; ++t) x += outer(random_schmidt_vector(dims, k, rng));
      return x / terms;
    }
    case ConeTag::BlockPos:
    case ConeTag::PosMaps: {
      if (d > 6 && !allow_subcone) {
        throw Error(ErrorCode::Unsupported, "block-positive matrices are sampled exactly only up to 2x3");
      }
      const double w = rng.uniform(0.1, 1.0);
      return w * sample_psd(d, rng) + (1.0 - w) * partial_transpose(sample_psd(d, rng), dims);
    }
    case ConeTag::SchmidtBP:
    case ConeTag::KPos:
      if (!square) throw Error(ErrorCode::Unsupported, "k-block-positive sampling needs square dims");
      return sample_map(cone, dims.first, rng, allow_subcone).choi();
  }
  throw Error(ErrorCode::UnknownCone, "unhandled cone tag");
}

}  // namespace conecalc
