// Acceptance criteria, one test per criterion. The custom listener prints
// exactly one "criterion N: PASS|FAIL (seconds)" line per test; a criterion
// also fails when it overruns its time budget.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "conecalc/choi.hpp"
#include "conecalc/cones.hpp"
#include "conecalc/mapcone.hpp"
#include "conecalc/opsys.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Budget guard: fails the running criterion when it took too long.
struct Budget {
  explicit Budget(double limit) : limit(limit), start(Clock::now()) {}
  ~Budget() {
    const double s = seconds_since(start);
    EXPECT_LT(s, limit) << "over the " << limit << " s budget";
  }
  double limit;
  Clock::time_point start;
};

CMat iso(int n, double lambda) { return identity(n * n) - lambda * max_entangled(n); }

TEST(Acceptance, Criterion01_FlipIdentity) {
  Budget b(5);
  for (int n : {2, 3}) {
    Rng rng(101, n);
    for (int t = 0; t < 100; ++t) {
      const LinMap phi = random_map(n, rng);
      const FlipIdentityReport r = verify_flip_identity(phi, 1e-10);
      ASSERT_TRUE(r.passed) << "n=" << n << " gap " << r.gap;
      ASSERT_LE(r.gap, 1e-10 * std::max(1.0, phi.choi().norm()));
    }
  }
}

TEST(Acceptance, Criterion02_ChoiIdentities) {
  Budget b(5);
  for (int n : {2, 3}) {
    const CMat f = swap_operator(n);
    Rng rng(102, n);
    for (int t = 0; t < 100; ++t) {
      const LinMap phi = random_map(n, rng);
      ASSERT_LE((adjoint(phi).choi() - f * phi.choi().transpose() * f).cwiseAbs().maxCoeff(), 1e-12);
      ASSERT_LE((transpose_twirl(phi).choi() - phi.choi().transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Acceptance, Criterion03_CompositionConsistency) {
  Budget b(5);
  Rng rng(103);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 2;
    const LinMap p = random_map(n, rng), q = random_map(n, rng), r = random_map(n, rng);
    const LinMap pqr = compose(p, compose(q, r));
    const LinMap by_action = choi_from_action(
        n, [&](const CMat& x) { return conecalc::apply(p, conecalc::apply(q, conecalc::apply(r, x))); });
    ASSERT_LE((pqr.choi() - by_action.choi()).norm(), 1e-10);
    const CMat a = random_gaussian(n, n, rng), bm = random_gaussian(n, n, rng);
    ASSERT_LE((compose(ad_map(a), ad_map(bm)).choi() - ad_map(bm * a).choi()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Acceptance, Criterion04_KPositivityBoundary) {
  Budget b(30);
  const Dims d{3, 3};
  for (int k : {1, 2, 3}) {
    for (double lambda : {0.2, 1.0 / 3.0, 0.5, 1.0}) {
      EXPECT_NEAR(min_schmidt_value(iso(3, lambda), d, k).value, 1.0 - lambda * k, 1e-6)
          << "k=" << k << " lambda=" << lambda;
    }
    const double past = 1.0 / k + 0.05;
    const Verdict v = is_k_positive(reduction_map(3, past), k);
    ASSERT_TRUE(v.is_not_member()) << "k=" << k;
    EXPECT_LT(recheck(*v.witness, iso(3, past)), 0.0);
  }
}

TEST(Acceptance, Criterion05_TransposeSeparations) {
  Budget b(5);
  const Verdict t1 = is_k_positive(transpose_map(2), 1);
  EXPECT_NE(t1.status, Status::NotMember);
  EXPECT_GE(t1.margin, -1e-9);
  const Verdict t2 = is_k_positive(transpose_map(2), 2);
  ASSERT_TRUE(t2.is_not_member());
  EXPECT_NEAR(t2.witness->value, -1.0, 1e-9);
}

TEST(Acceptance, Criterion06_DualThroughComposites) {
  Budget b(30);
  Rng rng(106);
  std::vector<LinMap> gens, duals;
  for (int i = 0; i < 12; ++i) {
    gens.push_back(sample_map({ConeTag::PosMaps, 1}, 2, rng));
    duals.push_back(sample_map({ConeTag::KSP, 1}, 2, rng));
  }
  const PropertyReport r = verify_prop41(gens, duals, 200, 106);
  EXPECT_TRUE(r.passed_as_supported());
  EXPECT_GE(r.metric("forward_trials"), 200.0);
  EXPECT_GE(r.metric("min_composite_eigenvalue"), -1e-9);
}

TEST(Acceptance, Criterion07_FirstConeIsPsd) {
  Budget b(60);
  const int n = 2;
  for (SystemTag tag : {SystemTag::Naive, SystemTag::OMIN, SystemTag::OMAX}) {
    const OSystem sys = OSystem::canonical(tag, n);
    const GenCone c1 = build_cm(sys, 1, 8, 107, 48 * n * n);
    for (int t = 0; t < 100; ++t) {
      Rng rng(derive_seed(107, t), 0x321u);
      const CMat p = random_psd_with_spectrum(n, 0.05, 1.0, rng);
      const Verdict vp = nnls_membership(c1, p, 1e-9);
      ASSERT_TRUE(vp.is_member()) << sys.name() << " trial " << t;
      EXPECT_LE(vp.certificate->residual, 1e-9);
      EXPECT_TRUE(nnls_membership(c1, random_indefinite(n, 0.05, 1.0, rng), 1e-9).is_not_member());
    }
    for (int m = 1; m <= n; ++m) {
      const GenCone cm = build_cm(sys, m, 4, 107 + m, 8);
      Rng rng(108, m);
      for (int t = 0; t < 10; ++t) {
        const CMat x = cm.gens()[static_cast<std::size_t>(rng.uniform_int(0, int(cm.size()) - 1))];
        const CMat v = random_isometry(n, m, rng);
        const CMat back = ad_first(v, ad_first(v.adjoint(), x, n), n);
        EXPECT_LE((back - x).norm(), 1e-12 * std::max(1.0, x.norm()));
      }
    }
  }
}

TEST(Acceptance, Criterion08_ReductionToNthCone) {
  Budget b(60);
  const int n = 2;
  const OSystem naive = OSystem::canonical(SystemTag::Naive, n);
  const OSystem ppt = OSystem::canonical(SystemTag::PPTSys, n);
  for (const OSystem* target : {&naive, &ppt}) {
    for (int t = 0; t < 50; ++t) {
      Rng rng(derive_seed(108, t));
      LinMap phi = identity_map(n);
      switch (t % 3) {
        case 0: phi = random_cp_map(n, rng); break;
        case 1: phi = compose(random_cp_map(n, rng), transpose_map(n)); break;
        default: phi = random_hermitian_map(n, rng); break;
      }
      const Verdict direct = cp_between(phi, naive, *target, 4, 108);
      Status levels = Status::Member;
      for (int m = 1; m <= 4 && levels == Status::Member; ++m) {
        levels = cp_at_level(phi, naive, *target, m, 4, derive_seed(108, m)).status;
      }
      EXPECT_EQ(direct.status, levels) << target->name() << " trial " << t;
    }
  }
}

TEST(Acceptance, Criterion09_Symmetry) {
  Budget b(60);
  for (const MapCone& c : {MapCone::canonical(MapConeTag::CP, 3), MapCone::canonical(MapConeTag::CoCP, 3),
                           MapCone::canonical(MapConeTag::KPos, 3, 2), MapCone::canonical(MapConeTag::KSP, 3, 2)}) {
    const PropertyReport r = check_symmetric(c, 200, 109);
    EXPECT_EQ(r.status(), PropertyStatus::Supported) << c.name();
    EXPECT_TRUE(r.consistent) << c.name();
    EXPECT_EQ(r.metric("route_disagreements"), 0.0) << c.name();
  }
}

TEST(Acceptance, Criterion10_CoCpNotSemigroup) {
  Budget b(1);
  for (std::uint64_t seed : {0u, 110u}) {
    const PropertyReport r = check_semigroup(MapCone::canonical(MapConeTag::CoCP, 2), 4, seed);
    ASSERT_EQ(r.status(), PropertyStatus::Refuted);
    const Violation& v = r.violations.front();
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.inputs.at(0), swap_operator(2));
    EXPECT_EQ(v.inputs.at(1), swap_operator(2));
    EXPECT_NEAR(recheck(*v.witness, max_entangled(2)), -1.0, 1e-12);
    EXPECT_NEAR(min_eigenvalue(partial_transpose(compose(transpose_map(2), transpose_map(2)).choi(), {2, 2})),
                -1.0, 1e-12);
  }
}

TEST(Acceptance, Criterion11_SemigroupDualAndInducedCones) {
  Budget b(60);
  const MapCone p2 = MapCone::canonical(MapConeTag::KPos, 3, 2);
  const PropertyReport r61 = verify_prop61(p2, 100, 111);
  EXPECT_TRUE(r61.passed_as_supported());
  EXPECT_GE(r61.metric("min_pairing"), -1e-9);
  for (SystemTag tag : {SystemTag::OMINk, SystemTag::OMAXk}) {
    const OSystem o = OSystem::canonical(tag, 3, 2);
    const PropertyReport r = verify_thm62(p2, o, 10, 111);
    EXPECT_TRUE(r.passed_as_supported()) << o.name();
    for (double lambda : {0.3, 0.5, 0.55, 1.0}) {
      const double oracle = double(is_k_positive(reduction_map(3, lambda), 2).status);
      char key[64];
      std::snprintf(key, sizeof key, "lambda=%.4g CP(O)", lambda);
      EXPECT_EQ(r.metric(key), oracle) << o.name() << " " << key;
      std::snprintf(key, sizeof key, "lambda=%.4g CP(O dual)", lambda);
      EXPECT_EQ(r.metric(key), oracle) << o.name() << " " << key;
    }
  }
}

TEST(Acceptance, Criterion12_SuperHomogeneity) {
  Budget b(30);
  for (const OSystem& sys : {OSystem::canonical(SystemTag::Naive, 2), OSystem::canonical(SystemTag::OMIN, 2),
                             OSystem::canonical(SystemTag::OMAX, 2), OSystem::canonical(SystemTag::PPTSys, 2),
                             OSystem::canonical(SystemTag::OMINk, 3, 2), OSystem::canonical(SystemTag::OMAXk, 3, 2)}) {
    const HomogeneityReport h = is_super_homogeneous(sys, 200, 112);
    EXPECT_EQ(h.status, Status::Member) << sys.name();
    EXPECT_GE(h.trials, 200) << sys.name();
  }
  Rng rng(112, 0x52u);
  const OSystem orbit = orbit_system(random_psd_with_spectrum(4, 0.1, 1.0, rng), 2, 8, 112);
  const HomogeneityReport h = is_super_homogeneous(orbit, 200, 112);
  ASSERT_EQ(h.status, Status::NotMember);
  ASSERT_TRUE(h.g && h.b && h.witness);
  EXPECT_LT(recheck(*h.witness, ad_second(*h.b, *h.g, 2)), 0.0);
  for (const CMat& g : orbit.cone().gens()) EXPECT_GE(real_pairing(h.witness->matrix, g), -1e-9);
}

// Prints one line per criterion and nothing else from gtest.
class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const std::string name = info.name();  // CriterionNN_Description
    const int number = std::stoi(name.substr(9, 2));
    const double s = static_cast<double>(info.result()->elapsed_time()) / 1000.0;
    std::printf("criterion %d: %s (%.2f s) %s\n", number, info.result()->Passed() ? "PASS" : "FAIL", s,
                name.substr(12).c_str());
    std::fflush(stdout);
  }
  void OnTestPartResult(const ::testing::TestPartResult& r) override {
    if (r.failed()) std::printf("  %s:%d: %s\n", r.file_name() ? r.file_name() : "?", r.line_number(), r.summary());
  }
};

}  // namespace
}  // namespace conecalc

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  listeners.Append(new conecalc::CriterionPrinter);
  return RUN_ALL_TESTS();
}
