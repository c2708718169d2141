#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conecalc/choi.hpp"
#include "conecalc/cones.hpp"
#include "conecalc/matrix.hpp"
#include "conecalc/verdict.hpp"

namespace conecalc {

enum class SystemTag { Naive, OMIN, OMAX, OMINk, OMAXk, PPTSys };

// An operator system on M_n, described by its n-th cone C_n. Level-m cones
// are C_m = { sum_i (Ad_{A_i} (x) id_n)(X) : A_i in M_{n,m}, X in C_n }.
//
// Canonical systems carry analytic oracles at every level. Generated
// systems carry a finite generator list for C_n. DualGenerated systems
// carry the generators of a cone K and have C_n = K's dual cone.
class OSystem {
 public:
  enum class Kind { Canonical, Generated, DualGenerated };

  /// OMIN and OMAX are stored as OMINk(1) and OMAXk(1); OMINk(n) and
  /// OMAXk(n) collapse to Naive. Throws BadK.
  static OSystem canonical(SystemTag tag, int n, int k = 1);
  /// Throws DimMismatch unless cn.dim() == n^2, EmptyCone if empty.
  static OSystem generated(int n, GenCone cn);
  static OSystem dual_of(int n, GenCone primal);

  int n() const { return n_; }
  Kind kind() const { return kind_; }
  SystemTag tag() const { return tag_; }
  int k() const { return k_; }
  int level_cap() const { return level_cap_; }
  const GenCone& cone() const { return cone_; }
  std::string name() const;
  OSystem with_level_cap(int cap) const;

  /// Membership of x in C_m, with x in M_m (x) M_n. Levels m <= n are
  /// decided through the embedding m -> n, which is exact. For m > n a
  /// Generated system certifies through build_cm and refutes through
  /// sampled compressions only.
  Verdict contains(const CMat& x, int m, const OracleOptions& opts = {}) const;
  Verdict contains_cn(const CMat& x, const OracleOptions& opts = {}) const {
    return contains(x, n_, opts);
  }

 private:
  OSystem() = default;

  int n_ = 0;
  Kind kind_ = Kind::Canonical;
  SystemTag tag_ = SystemTag::Naive;
  int k_ = 1;
  int level_cap_ = 0;
  GenCone cone_;
};

/// Elements of C_n for a canonical or generated system: deterministic
/// probes, product projectors built from the frame states e_i,
/// (e_i + u e_j)/sqrt 2 (u a fourth root of unity), then `random_count`
/// random extreme-type elements. Generated systems return their generators.
/// Throws Unsupported for DualGenerated. `frame = false` skips the frame
/// products.
std::vector<CMat> cn_generators(const OSystem& sys, int random_count, std::uint64_t seed,
                                bool frame = true);

/// Frame states listed above, in a fixed order.
std::vector<CVec> frame_states(int n);

/// Random n x n matrix whose columns are each zero or a fourth root of
/// unity times a standard basis vector. Such matrices form a finite
/// semigroup that permutes the frame states up to scale.
CMat random_phase_monomial(int n, Rng& rng);

/// Mixed state (1 - r) I / n + r psi psi* with r uniform in [0, r_max].
CMat random_mixed_state(int n, double r_max, Rng& rng);

/// Hypothesis check for a generated C_n: (a) no generator has a product
/// witness, (b) sampled separable elements (products of mixed states of
/// purity radius <= 0.5) are members, (c) compressions (Ad_A (x) id) of
/// generators by sampled phase-monomial A are members.
Verdict is_valid_cn(const GenCone& cn, int n, int samples, std::uint64_t seed,
                    const OracleOptions& opts = {});

/// Inner approximation of C_m: pushes of C_n generators by every matrix
/// unit of M_{n,m} and `a_samples` Gaussian matrices. Throws BadLevel.
GenCone build_cm(const OSystem& sys, int m, int a_samples, std::uint64_t seed,
                 int random_generators = 24);
/// Same, with an explicit list of n x m compressions.
GenCone build_cm(const OSystem& sys, int m, const std::vector<CMat>& as,
                 int random_generators = 24, std::uint64_t seed = 0);

struct AxiomReport {
  int c1_members = 0;      // sampled PSD accepted
  int c1_refuted = 0;      // sampled non-PSD refuted
  int c1_trials = 0;
  int salience_refuted = 0;
  int salience_trials = 0;
  std::vector<double> archimedean_r;  // smallest certified shift per sample
  int archimedean_inconclusive = 0;
  bool passed = false;
};

/// C_1 = M_n^+ in both directions, salience on C_n generators, and the
/// Archimedean shift found by doubling and bisection up to r_max.
AxiomReport verify_os_axioms(const OSystem& sys, int samples, std::uint64_t seed,
                             const OracleOptions& opts = {}, double r_max = 1e3);

struct HomogeneityReport {
  Status status = Status::Member;  // Member: no violation in `trials`
  int trials = 0;
  int inconclusive = 0;
  std::optional<CMat> g;  // violating C_n element
  std::optional<CMat> b;  // violating B
  std::optional<Witness> witness;  // separates (id (x) Ad_B)(G) from C_n
};

/// Pushes C_n generators through (id_n (x) Ad_B) for B = I, phase
/// monomials and Gaussian B, and tests membership.
HomogeneityReport is_super_homogeneous(const OSystem& sys, int samples, std::uint64_t seed,
                                       const OracleOptions& opts = {});

/// Complete positivity of phi from o1 to o2. Registered pairs are decided
/// through the known identification of CP(o1, o2) with a cone of maps;
/// other pairs are refutation-only (pushed C_n generators).
Verdict cp_between(const LinMap& phi, const OSystem& o1, const OSystem& o2, int samples,
                   std::uint64_t seed, const OracleOptions& opts = {});
/// Refutation-only: pushes C_n generators of o1 through (id_n (x) phi) and
/// tests them in D_n. NotMember is exact; otherwise Inconclusive.
Verdict cp_by_pushes(const LinMap& phi, const OSystem& o1, const OSystem& o2, int random_count,
                     std::uint64_t seed, const OracleOptions& opts = {}, bool frame = true);
/// True when cp_between decides (o1, o2) by an identification.
bool is_registered_pair(const OSystem& o1, const OSystem& o2);

/// Tests (id_m (x) phi)(C_m) within D_m at one level by pushing C_n
/// generators through (Ad_A (x) phi) for isometric, matrix-unit and
/// Gaussian A in M_{n,m}. NotMember is exact; Member means no violation.
Verdict cp_at_level(const LinMap& phi, const OSystem& o1, const OSystem& o2, int m, int samples,
                    std::uint64_t seed, const OracleOptions& opts = {});

/// Generated system spanned by the compressions (Ad_A (x) id)(x0) of one
/// element, over every n x n matrix unit and `a_samples` Gaussian A. For
/// generic PSD x0 the cone is not closed under (id (x) Ad_B).
OSystem orbit_system(const CMat& x0, int n, int a_samples, std::uint64_t seed);

/// Naive and PPTSys are self-dual, OMINk and OMAXk are exchanged,
/// Generated and DualGenerated are exchanged.
OSystem dual_system(const OSystem& sys);

}  // namespace conecalc
