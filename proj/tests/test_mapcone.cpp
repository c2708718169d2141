#include <gtest/gtest.h>

#include "conecalc/error.hpp"
#include "conecalc/mapcone.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {
namespace {

const Dims k22{2, 2};

TEST(ChoiCone, Examples) {
  const MapCone gen = MapCone::generated({identity_map(2)});
  const GenCone g = choi_cone(gen);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.gens()[0], max_entangled(2));
  const GenCone cp = choi_cone(MapCone::canonical(MapConeTag::CP, 2), 50, 1);
  EXPECT_EQ(cp.size(), 50u);
  for (const CMat& c : cp.gens()) EXPECT_TRUE(is_psd(c).is_member());
  const GenCone cocp = choi_cone(MapCone::canonical(MapConeTag::CoCP, 2), 50, 1);
  for (const CMat& c : cocp.gens()) {
    EXPECT_TRUE(is_ppt(c, k22).is_member());
    EXPECT_TRUE(is_psd(partial_transpose(c, k22)).is_member());
  }
}

TEST(MapCone, Validation) {
  EXPECT_THROW(MapCone::canonical(MapConeTag::KPos, 2, 3), Error);
  EXPECT_THROW(MapCone::generated({}), Error);
  EXPECT_THROW(MapCone::generated({identity_map(2), identity_map(3)}), Error);
  EXPECT_FALSE(MapCone::canonical(MapConeTag::PosMaps, 3).exact_sampler());
  EXPECT_TRUE(MapCone::canonical(MapConeTag::PosMaps, 2).exact_sampler());
}

TEST(OsFromMapcone, CanonicalCatalog) {
  EXPECT_EQ(os_from_mapcone(MapCone::canonical(MapConeTag::CP, 2)).tag(), SystemTag::Naive);
  const OSystem sp = os_from_mapcone(MapCone::canonical(MapConeTag::SP, 2));
  EXPECT_EQ(sp.tag(), SystemTag::OMAXk);
  EXPECT_EQ(sp.k(), 1);
  EXPECT_EQ(os_from_mapcone(MapCone::canonical(MapConeTag::CoCP, 2)).tag(), SystemTag::PPTSys);
  const OSystem pos = os_from_mapcone(MapCone::canonical(MapConeTag::PosMaps, 2));
  EXPECT_EQ(pos.tag(), SystemTag::OMINk);
}

TEST(OsFromMapcone, RejectsNonInvariantRay) {
  const MapCone ray = MapCone::generated({identity_map(2)});
  try {
    os_from_mapcone(ray, 20, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotRightCPInvariant);
  }
}

TEST(MapconeFromOs, MatchesOracles) {
  const MapCone cp = mapcone_from_os(OSystem::canonical(SystemTag::Naive, 3));
  const MapCone p2 = mapcone_from_os(OSystem::canonical(SystemTag::OMINk, 3, 2));
  Rng rng(1);
  for (int t = 0; t < 30; ++t) {
    const LinMap phi = t % 2 ? random_hermitian_map(3, rng) : random_reduction_orbit(3, 2, rng);
    EXPECT_EQ(cp.contains(phi).status, is_psd(phi.choi()).status);
    EXPECT_EQ(p2.contains(phi).status, is_k_positive(phi, 2).status);
  }
}

// Bijection round trip: verdicts through the induced system equal the
// cone's own verdicts on members and non-members.
TEST(MapconeFromOs, RoundTripAgreement) {
  struct Case {
    MapConeTag tag;
    int n;
    int k;
  };
  for (const Case& c : {Case{MapConeTag::CP, 2, 1}, Case{MapConeTag::CoCP, 2, 1}, Case{MapConeTag::KPos, 3, 2},
                        Case{MapConeTag::KSP, 2, 1}}) {
    const MapCone cone = MapCone::canonical(c.tag, c.n, c.k);
    const MapCone back = mapcone_from_os(os_from_mapcone(cone));
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
      const LinMap phi = t % 2 ? cone.sample(rng) : random_hermitian_map(c.n, rng);
      EXPECT_EQ(cone.contains(phi).status, back.contains(phi).status) << cone.name() << " " << t;
    }
  }
}

TEST(Invariance, RightCp) {
  EXPECT_TRUE(check_right_cp_invariance(MapCone::canonical(MapConeTag::CP, 2), 50, 1).passed_as_supported());
  const MapCone t_cone = MapCone::generated(
      {transpose_map(2)}, [](const LinMap& phi, const OracleOptions& o) { return check_map({ConeTag::CoCP, 1}, phi, o); });
  EXPECT_TRUE(check_right_cp_invariance(t_cone, 50, 2).passed_as_supported());
  const PropertyReport ray = check_right_cp_invariance(MapCone::generated({identity_map(2)}), 20, 3);
  ASSERT_EQ(ray.status(), PropertyStatus::Refuted);
  ASSERT_TRUE(ray.violations.front().witness);
  EXPECT_LT(ray.violations.front().witness->value, 0.0);
}

TEST(Invariance, LeftCpAndAdjointDuality) {
  EXPECT_TRUE(check_left_cp_invariance(MapCone::canonical(MapConeTag::CP, 2), 50, 1).passed_as_supported());
  EXPECT_TRUE(check_left_cp_invariance(MapCone::canonical(MapConeTag::KSP, 2), 50, 1).passed_as_supported());
  for (const MapCone& c : {MapCone::canonical(MapConeTag::CP, 2), MapCone::canonical(MapConeTag::CoCP, 2),
                           MapCone::canonical(MapConeTag::KPos, 3, 2)}) {
    const PropertyReport right = check_right_cp_invariance(c, 20, 4);
    const PropertyReport left = check_left_cp_invariance(c.adjoint_cone(), 20, 4);
    EXPECT_EQ(right.status(), left.status()) << c.name();
    EXPECT_EQ(left.metric("adjoint_right_agrees"), 1.0) << c.name();
  }
}

TEST(Semigroup, Examples) {
  EXPECT_TRUE(check_semigroup(MapCone::canonical(MapConeTag::CP, 2), 50, 1).passed_as_supported());
  EXPECT_TRUE(check_semigroup(MapCone::canonical(MapConeTag::KSP, 2), 50, 1).passed_as_supported());
}

// T o T = id, whose Choi matrix E fails PPT with eigenvalue -1, on every
// seed.
TEST(Semigroup, CoCpRefutedDeterministically) {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const PropertyReport r = check_semigroup(MapCone::canonical(MapConeTag::CoCP, 2), 10, seed);
    ASSERT_EQ(r.status(), PropertyStatus::Refuted);
    const Violation& v = r.violations.front();
    EXPECT_EQ(v.trial, 0);
    ASSERT_TRUE(v.witness);
    EXPECT_NEAR(v.witness->value, -1.0, 1e-12);
    ASSERT_GE(v.inputs.size(), 2u);
    EXPECT_EQ(v.inputs[0], swap_operator(2));
    EXPECT_EQ(v.inputs[1], swap_operator(2));
    EXPECT_NEAR(recheck(*v.witness, max_entangled(2)), -1.0, 1e-12);
  }
}

TEST(Symmetric, CanonicalCones) {
  for (const MapCone& c : {MapCone::canonical(MapConeTag::CP, 2), MapCone::canonical(MapConeTag::CoCP, 2),
                           MapCone::canonical(MapConeTag::KPos, 2, 1), MapCone::canonical(MapConeTag::KSP, 2, 1)}) {
    const PropertyReport r = check_symmetric(c, 30, 5);
    EXPECT_TRUE(r.passed_as_supported()) << c.name();
    EXPECT_EQ(r.metric("route_disagreements"), 0.0) << c.name();
  }
}

TEST(DualThroughComposites, Examples) {
  Rng rng(6);
  std::vector<LinMap> cp_gens, cp_duals;
  for (int i = 0; i < 8; ++i) {
    cp_gens.push_back(ad_map(random_gaussian(2, 2, rng)));
    cp_duals.push_back(random_cp_map(2, rng));
  }
  EXPECT_TRUE(verify_prop41(cp_gens, cp_duals, 50, 1).passed_as_supported());

  std::vector<LinMap> pos_gens, sp_duals;
  for (int i = 0; i < 8; ++i) {
    pos_gens.push_back(sample_map({ConeTag::PosMaps, 1}, 2, rng));
    sp_duals.push_back(sample_map({ConeTag::KSP, 1}, 2, rng));
  }
  const PropertyReport pos = verify_prop41(pos_gens, sp_duals, 50, 2);
  EXPECT_TRUE(pos.passed_as_supported());
  EXPECT_GE(pos.metric("min_composite_eigenvalue"), -1e-9);

  // Psi with C = I (x) I - E pairs to -2 with the identity, and then some
  // generator composite must fail to be CP.
  const LinMap psi = LinMap::from_choi(identity(4) - max_entangled(2));
  EXPECT_NEAR(real_pairing(max_entangled(2), psi.choi()), -2.0, 1e-12);
  EXPECT_LT(min_eigenvalue(adjoint(psi).choi()), 0.0);
  const PropertyReport non_dual = verify_prop41({identity_map(2)}, {psi}, 10, 3);
  EXPECT_TRUE(non_dual.passed_as_supported());
  EXPECT_GT(non_dual.metric("reverse_trials"), 0.0);
}

TEST(SemigroupDualPairing, Examples) {
  const PropertyReport cp = verify_prop61(MapCone::canonical(MapConeTag::CP, 2), 50, 1);
  EXPECT_TRUE(cp.passed_as_supported());
  EXPECT_GE(cp.metric("min_pairing"), -1e-9);
  const PropertyReport kp = verify_prop61(MapCone::canonical(MapConeTag::KPos, 3, 2), 30, 2);
  EXPECT_TRUE(kp.passed_as_supported());
  // Identity against CP Omega: Tr(E C_Omega) >= 0.
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    EXPECT_GE(real_pairing(max_entangled(2), random_cp_map(2, rng).choi()), -1e-12);
  }
  try {
    verify_prop61(MapCone::canonical(MapConeTag::CoCP, 2), 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionFailed);
  }
}

TEST(InducedSystemCones, ReductionBoundary) {
  const MapCone p2 = MapCone::canonical(MapConeTag::KPos, 3, 2);
  for (SystemTag tag : {SystemTag::OMINk, SystemTag::OMAXk}) {
    const OSystem o = OSystem::canonical(tag, 3, 2);
    const PropertyReport r = verify_thm62(p2, o, 10, 1);
    EXPECT_TRUE(r.passed_as_supported()) << o.name();
    for (double lambda : {0.3, 0.5, 0.55, 1.0}) {
      char key[64];
      std::snprintf(key, sizeof key, "lambda=%.4g CP(O)", lambda);
      const double expect = lambda <= 0.5 ? double(Status::Member) : double(Status::NotMember);
      EXPECT_EQ(r.metric(key), expect) << key;
      std::snprintf(key, sizeof key, "lambda=%.4g CP(O dual)", lambda);
      EXPECT_EQ(r.metric(key), expect) << key;
    }
  }
}

TEST(InducedSystemCones, SelfCaseAndRegistration) {
  const PropertyReport r =
      verify_thm62(MapCone::canonical(MapConeTag::CP, 2), OSystem::canonical(SystemTag::Naive, 2), 10, 1);
  EXPECT_TRUE(r.passed_as_supported());
  try {
    verify_thm62(MapCone::canonical(MapConeTag::KPos, 3, 2), OSystem::canonical(SystemTag::PPTSys, 3), 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnregisteredPair);
  }
}

TEST(PositivityProbe, ProbeRefutesNonPositive) {
  const PropertyReport r = verify_lemma51(2, 20, 1);
  EXPECT_TRUE(r.passed_as_supported());
  // -id sends the probe I to -I; Phi_1.2 has Tr(X) - 1.2 x < 0 on a pure
  // state.
  EXPECT_LT(min_eigenvalue(conecalc::apply(identity_map(2) * -1.0, identity(2))), 0.0);
  CMat p = CMat::Zero(2, 2);
  p(0, 0) = 1.0;
  EXPECT_NEAR(min_eigenvalue(conecalc::apply(reduction_map(2, 1.2), p)), -0.2, 1e-12);
}

TEST(DualCone, CanonicalPairs) {
  EXPECT_EQ(MapCone::canonical(MapConeTag::KPos, 3, 2).dual_cone().tag(), MapConeTag::KSP);
  EXPECT_EQ(MapCone::canonical(MapConeTag::PosMaps, 2).dual_cone().tag(), MapConeTag::SP);
  EXPECT_EQ(MapCone::canonical(MapConeTag::CP, 2).dual_cone().tag(), MapConeTag::CP);
  EXPECT_THROW(MapCone::generated({identity_map(2)}).dual_cone(), Error);
}

}  // namespace
}  // namespace conecalc
