#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conecalc/choi.hpp"
#include "conecalc/cones.hpp"
#include "conecalc/opsys.hpp"
#include "conecalc/verdict.hpp"

namespace conecalc {

enum class MapConeTag { CP, CoCP, KPos, KSP, PosMaps, SP };

// A cone of linear maps on M_n with a membership oracle and a sampler.
// Canonical cones use the matrix oracles on Choi matrices. Generated cones
// use NNLS membership in the cone spanned by their generators' Choi
// matrices unless an oracle is supplied. Induced cones are CP(M_n, O).
class MapCone {
 public:
  enum class Kind { Canonical, Generated, Induced };
  using Oracle = std::function<Verdict(const LinMap&, const OracleOptions&)>;

  /// Throws BadK. PosMaps at n >= 3 samples the decomposable subcone.
  static MapCone canonical(MapConeTag tag, int n, int k = 1);
  /// Throws EmptyCone or DimMismatch.
  static MapCone generated(std::vector<LinMap> gens, Oracle oracle = {});
  static MapCone induced(const OSystem& sys);

  int n() const { return n_; }
  Kind kind() const { return kind_; }
  MapConeTag tag() const { return tag_; }
  int k() const { return k_; }
  const std::vector<LinMap>& gens() const { return gens_; }
  const std::optional<OSystem>& system() const { return system_; }
  const std::string& name() const { return name_; }
  /// False for PosMaps at n >= 3, whose sampler covers a subcone only.
  bool exact_sampler() const { return exact_sampler_; }

  Verdict contains(const LinMap& phi, const OracleOptions& opts = {}) const;
  LinMap sample(Rng& rng) const;

  /// { Phi^dagger : Phi in C }.
  MapCone adjoint_cone() const;
  /// The dual cone, for canonical cones only (Unsupported otherwise).
  MapCone dual_cone() const;

 private:
  MapCone() = default;

  int n_ = 0;
  Kind kind_ = Kind::Canonical;
  MapConeTag tag_ = MapConeTag::CP;
  int k_ = 1;
  bool exact_sampler_ = true;
  std::string name_;
  std::vector<LinMap> gens_;
  std::optional<OSystem> system_;
  Oracle oracle_;
  std::function<LinMap(Rng&)> sampler_;
};

enum class PropertyStatus { Supported, Refuted };

struct Violation {
  int trial = 0;
  std::string detail;
  std::vector<CMat> inputs;  // Choi matrices or B matrices, as named in detail
  std::optional<Witness> witness;
  double margin = 0.0;
};

struct PropertyReport {
  std::string property;
  int trials = 0;
  std::uint64_t seed = 0;
  int inconclusive = 0;
  // False when two routes that must agree did not; the report then
  // fails regardless of violations.
  bool consistent = true;
  std::vector<Violation> violations;  // ordered by trial
  std::vector<std::pair<std::string, double>> metrics;

  PropertyStatus status() const {
    return violations.empty() ? PropertyStatus::Supported : PropertyStatus::Refuted;
  }
  bool passed_as_supported() const { return consistent && violations.empty(); }
  double metric(const std::string& key) const;
};

std::string_view to_string(PropertyStatus s);

/// Choi matrices of the generators (Generated) or of `samples` samples.
GenCone choi_cone(const MapCone& c, int samples = 50, std::uint64_t seed = 0);

/// Operator system with C_n equal to the Choi cone. Canonical tags map to
/// the catalogued systems; Generated cones are first checked for
/// right-CP-invariance (NotRightCPInvariant).
OSystem os_from_mapcone(const MapCone& c, int samples = 50, std::uint64_t seed = 0);
MapCone mapcone_from_os(const OSystem& sys);

/// Phi o Ad_B in C for sampled Phi in C and Gaussian B.
PropertyReport check_right_cp_invariance(const MapCone& c, int samples, std::uint64_t seed,
                                         const OracleOptions& opts = {});
/// Ad_B o Phi in C; also runs the right check on C^dagger and records
/// whether the two statuses agree (metric "adjoint_right_agrees").
PropertyReport check_left_cp_invariance(const MapCone& c, int samples, std::uint64_t seed,
                                        const OracleOptions& opts = {});
/// Phi o Psi in C, starting from named elements of the cone (for CoCP the
/// transpose map, so T o T = id is tested first on every run).
PropertyReport check_semigroup(const MapCone& c, int samples, std::uint64_t seed,
                               const OracleOptions& opts = {});
/// Closure of the Choi cone under X -> X^T, X -> F X F and X -> F X^T F,
/// cross-checked against membership of T o Phi o T and Phi^dagger built
/// from the action alone. Route disagreement marks the report inconsistent.
PropertyReport check_symmetric(const MapCone& c, int samples, std::uint64_t seed,
                               const OracleOptions& opts = {});

/// For each trial, Psi = duals[t % size] and Phi a conic combination of
/// generators right-composed with sampled Ad_B. Psi passing the pairing
/// test must give a PSD Choi matrix for Psi^dagger o Phi; Psi failing it
/// must give a non-PSD one for some generator.
PropertyReport verify_prop41(const std::vector<LinMap>& cgens, const std::vector<LinMap>& duals,
                             int samples, std::uint64_t seed, const OracleOptions& opts = {});

/// For Phi, Omega in C and Psi in the dual cone, Tr(C_{Phi^dagger o Psi}
/// C_Omega) >= -margin. Requires a canonical semigroup cone containing CP
/// (PreconditionFailed).
PropertyReport verify_prop61(const MapCone& c, int samples, std::uint64_t seed,
                             const OracleOptions& opts = {});

/// Registered pairs: C = KPos(k) (or CP when k = n) with O = OMIN_k or
/// OMAX_k (Naive when k = n). Checks the semigroup and sandwich
/// conditions, that CP(O) and CP(O°) agree with C on samples and on the
/// reduction family, and that CP(O°) agrees with CP(O) on adjoints.
/// Throws UnregisteredPair.
PropertyReport verify_thm62(const MapCone& c, const OSystem& o, int samples, std::uint64_t seed,
                            const OracleOptions& opts = {},
                            const std::vector<double>& lambdas = {0.3, 0.5, 0.55, 1.0});

/// For each registered pair of canonical systems and each sampled map
/// with a positivity violation, the probe I (x) X must leave D_n and
/// cp_between must not report Member; CP maps must never be refuted.
PropertyReport verify_lemma51(int n, int samples, std::uint64_t seed, const OracleOptions& opts = {});

}  // namespace conecalc
