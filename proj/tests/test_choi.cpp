#include <gtest/gtest.h>

#include "conecalc/choi.hpp"
#include "conecalc/error.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {
namespace {

CMat unit(int n, int i, int j) {
  CMat e = CMat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

// Basis-expansion oracle, written out independently of choi_from_action.
CMat choi_by_units(int n, const Action& f) {
  CMat c = CMat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c += kron(unit(n, i, j), f(unit(n, i, j)));
  }
  return c;
}

double gap(const LinMap& a, const LinMap& b) { return (a.choi() - b.choi()).norm(); }

TEST(ChoiFromAction, NamedMaps) {
  EXPECT_EQ(choi_from_action(2, [](const CMat& x) { return x; }).choi(), max_entangled(2));
  EXPECT_EQ(choi_from_action(2, [](const CMat& x) { return CMat(x.transpose()); }).choi(), swap_operator(2));
  EXPECT_EQ(choi_from_action(2, [](const CMat& x) { return CMat(x.trace() * identity(2)); }).choi(), identity(4));
  EXPECT_EQ(identity_map(3).choi(), max_entangled(3));
  EXPECT_EQ(transpose_map(3).choi(), swap_operator(3));
  EXPECT_EQ(trace_map(3).choi(), identity(9));
}

TEST(ChoiFromAction, RejectsNonlinear) {
  try {
    choi_from_action(2, [](const CMat& x) { return CMat(x.cwiseAbs().cast<Complex>()); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonLinearAction);
  }
}

TEST(AdMap, Examples) {
  EXPECT_EQ(ad_map(identity(2)).choi(), max_entangled(2));
  const CMat c = ad_map(unit(2, 0, 1)).choi();
  EXPECT_NEAR(c.trace().real(), 1.0, 1e-14);
  const EigResult r = herm_eig(c);
  EXPECT_NEAR(r.values(3), 1.0, 1e-12);
  EXPECT_NEAR(r.values(2), 0.0, 1e-12);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    EXPECT_GE(min_eigenvalue(ad_map(random_gaussian(3, 3, rng)).choi()), -1e-10);
  }
  EXPECT_THROW(ad_map(CMat::Zero(2, 3)), Error);
}

TEST(Apply, MatchesDirectFormulas) {
  Rng rng(2);
  const CMat x = random_gaussian(3, 3, rng);
  EXPECT_LE((conecalc::apply(identity_map(3), x) - x).norm(), 1e-14);
  EXPECT_LE(conecalc::apply(trace_map(2), unit(2, 0, 1)).norm(), 0.0);
  const CMat a = random_gaussian(3, 3, rng);
  EXPECT_LE((conecalc::apply(ad_map(a), x) - a.adjoint() * x * a).norm(), 1e-12);
  EXPECT_THROW(conecalc::apply(identity_map(2), x), Error);
}

// Every construction path agrees with the basis-expansion oracle through
// apply.
TEST(LinMapInvariant, ActionReproducesChoi) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    const LinMap maps[] = {random_map(n, rng), random_cp_map(n, rng), random_hermitian_map(n, rng),
                           LinMap::from_kraus(kraus_from_choi(random_map(n, rng)))};
    for (const LinMap& phi : maps) {
      const CMat c = choi_by_units(n, [&](const CMat& x) { return conecalc::apply(phi, x); });
      EXPECT_LE((c - phi.choi()).norm(), 1e-10);
    }
  }
}

TEST(Kraus, FromChoi) {
  const auto id = kraus_from_choi(identity_map(2));
  ASSERT_EQ(id.size(), 1u);
  const CMat x = unit(2, 0, 1) + 2.0 * unit(2, 1, 1);
  EXPECT_LE((id[0].a * x * id[0].b.adjoint() - x).norm(), 1e-12);

  Rng rng(4);
  const CMat a = random_gaussian(3, 3, rng);
  const auto ka = kraus_from_choi(ad_map(a));
  ASSERT_EQ(ka.size(), 1u);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const CMat e = unit(3, i, j);
      EXPECT_LE((ka[0].a * e * ka[0].b.adjoint() - a.adjoint() * e * a).norm(), 1e-10);
    }
  }
  for (int t = 0; t < 50; ++t) {
    const LinMap phi = random_map(2 + t % 2, rng);
    EXPECT_LE(gap(LinMap::from_kraus(kraus_from_choi(phi)), phi), 1e-10);
  }
}

TEST(Kraus, CpCanonicalForm) {
  Rng rng(5);
  const LinMap phi = random_cp_map(3, rng);
  for (const KrausPair& p : kraus_from_choi(phi)) EXPECT_LE((p.a - p.b).norm(), 1e-12);
}

TEST(Kraus, InconsistentCacheRejected) {
  Rng rng(5);
  std::vector<KrausPair> pairs{{random_gaussian(2, 2, rng), random_gaussian(2, 3, rng)}};
  EXPECT_THROW(LinMap::from_kraus(pairs), Error);
}

TEST(FromChoi, DimensionChecks) {
  EXPECT_THROW(LinMap::from_choi(CMat::Zero(4, 5)), Error);
  EXPECT_THROW(LinMap::from_choi(CMat::Zero(5, 5)), Error);
  EXPECT_EQ(LinMap::from_choi(max_entangled(2)).dim(), 2);
}

TEST(ApplyAmplified, Examples) {
  Rng rng(6);
  const CMat x = random_gaussian(4, 4, rng);
  EXPECT_LE((apply_amplified(2, identity_map(2), x) - x).norm(), 1e-14);
  EXPECT_EQ(apply_amplified(2, transpose_map(2), max_entangled(2)), swap_operator(2));
  const LinMap phi = random_map(2, rng);
  const CMat y = random_gaussian(3, 3, rng), z = random_gaussian(2, 2, rng);
  EXPECT_LE((apply_amplified(3, phi, kron(y, z)) - kron(y, conecalc::apply(phi, z))).norm(), 1e-12);
  EXPECT_LE((apply_amplified_left(phi, 3, kron(z, y)) - kron(conecalc::apply(phi, z), y)).norm(), 1e-12);
}

TEST(Compose, Examples) {
  Rng rng(7);
  const LinMap phi = random_map(2, rng);
  EXPECT_LE(gap(compose(phi, identity_map(2)), phi), 1e-14);
  EXPECT_EQ(compose(transpose_map(2), transpose_map(2)).choi(), max_entangled(2));
  const CMat a = random_gaussian(2, 2, rng), b = random_gaussian(2, 2, rng);
  EXPECT_LE(gap(compose(ad_map(a), ad_map(b)), ad_map(b * a)), 1e-12);
}

TEST(Compose, MatchesActionAndAssociates) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 2;
    const LinMap p = random_map(n, rng), q = random_map(n, rng), r = random_map(n, rng);
    const LinMap pq = compose(p, q);
    const LinMap by_action =
        choi_from_action(n, [&](const CMat& x) { return conecalc::apply(p, conecalc::apply(q, x)); });
    EXPECT_LE(gap(pq, by_action), 1e-10);
    EXPECT_LE(gap(compose(pq, r), compose(p, compose(q, r))), 1e-10);
  }
  EXPECT_THROW(compose(identity_map(2), identity_map(3)), Error);
}

TEST(Adjoint, TracePairingDefinition) {
  Rng rng(9);
  const CMat f = swap_operator(2);
  EXPECT_EQ(adjoint(identity_map(2)).choi(), max_entangled(2));
  for (int t = 0; t < 50; ++t) {
    const LinMap phi = random_map(2, rng);
    const LinMap dag = adjoint(phi);
    EXPECT_LE((dag.choi() - f * phi.choi().transpose() * f).norm(), 1e-12);
    EXPECT_LE(gap(adjoint(dag), phi), 1e-12);
    const CMat x = random_hermitian(2, rng), y = random_hermitian(2, rng);
    EXPECT_LE(std::abs(trace_pairing(conecalc::apply(phi, x), y) - trace_pairing(x, conecalc::apply(dag, y))),
              1e-10);
  }
  const CMat a = random_gaussian(3, 3, rng);
  EXPECT_LE(gap(adjoint(ad_map(a)), ad_map(a.adjoint())), 1e-12);
}

TEST(TransposeTwirl, Examples) {
  Rng rng(10);
  EXPECT_EQ(transpose_twirl(identity_map(2)).choi(), max_entangled(2));
  EXPECT_EQ(transpose_twirl(transpose_map(2)).choi(), swap_operator(2));
  const CMat a = random_gaussian(2, 2, rng);
  EXPECT_LE(gap(transpose_twirl(ad_map(a)), ad_map(a.conjugate())), 1e-12);
  for (int t = 0; t < 20; ++t) {
    const LinMap phi = random_map(3, rng);
    const LinMap tw = transpose_twirl(phi);
    EXPECT_LE((tw.choi() - phi.choi().transpose()).norm(), 1e-12);
    EXPECT_LE(gap(tw, compose(compose(transpose_map(3), phi), transpose_map(3))), 1e-10);
  }
}

TEST(FlipIdentity, Holds) {
  EXPECT_EQ(verify_flip_identity(identity_map(2)).gap, 0.0);
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const FlipIdentityReport r = verify_flip_identity(random_map(2 + t % 2, rng));
    EXPECT_TRUE(r.passed) << r.gap;
  }
  // The Ad special case: (id (x) Ad_A)(E) = (Ad_{A^T} (x) id)(E).
  const CMat a = random_gaussian(3, 3, rng);
  const CMat lhs = apply_amplified(3, ad_map(a), max_entangled(3));
  const CMat rhs = apply_amplified_left(ad_map(a.transpose()), 3, max_entangled(3));
  EXPECT_LE((lhs - rhs).norm(), 1e-12);
  EXPECT_TRUE(verify_flip_identity(ad_map(a)).passed);
}

TEST(LinMap, Arithmetic) {
  const LinMap s = identity_map(2) + transpose_map(2) * 2.0;
  EXPECT_EQ(s.choi(), max_entangled(2) + 2.0 * swap_operator(2));
  EXPECT_TRUE(s.hermiticity_preserving());
  Rng rng(12);
  EXPECT_FALSE(random_map(2, rng).hermiticity_preserving());
  EXPECT_EQ(reduction_map(2, 1.0).choi(), identity(4) - max_entangled(2));
}

}  // namespace
}  // namespace conecalc
