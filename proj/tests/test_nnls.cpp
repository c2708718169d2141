#include <gtest/gtest.h>

#include "conecalc/cones.hpp"
#include "conecalc/error.hpp"
#include "conecalc/nnls.hpp"

namespace conecalc {
namespace {

TEST(Nnls, KktConditions) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd a(12, 7);
    for (int i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    Eigen::VectorXd b(12);
    for (int i = 0; i < 12; ++i) b(i) = rng.normal();
    const NnlsResult r = nnls(a, b);
    ASSERT_TRUE(r.converged);
    EXPECT_GE(r.x.minCoeff(), 0.0);
    const Eigen::VectorXd w = a.transpose() * (b - a * r.x);
    for (int i = 0; i < 7; ++i) {
      EXPECT_LE(w(i), 1e-10);
      if (r.x(i) > 0) EXPECT_NEAR(w(i), 0.0, 1e-9);
    }
    EXPECT_NEAR(r.residual, (a * r.x - b).norm(), 1e-12);
  }
}

TEST(Nnls, ExactInteriorSolution) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd b(3);
  b << 1, -2, 3;
  const NnlsResult r = nnls(a, b);
  EXPECT_DOUBLE_EQ(r.x(0), 1.0);
  EXPECT_DOUBLE_EQ(r.x(1), 0.0);
  EXPECT_DOUBLE_EQ(r.x(2), 3.0);
  EXPECT_NEAR(r.residual, 2.0, 1e-14);
}

TEST(Realify, IsometricPairing) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const CMat x = random_hermitian(4, rng), y = random_hermitian(4, rng);
    EXPECT_NEAR(realify(x).dot(realify(y)), real_pairing(x, y), 1e-12);
    EXPECT_LE((unrealify(realify(x), 4) - x).norm(), 1e-14);
  }
}

CMat e11e11() {
  CMat g = CMat::Zero(4, 4);
  g(0, 0) = 1.0;
  return g;
}

TEST(NnlsMembership, SingleGenerator) {
  const GenCone cone(4, {e11e11()});
  const Verdict in = nnls_membership(cone, e11e11());
  ASSERT_TRUE(in.is_member());
  ASSERT_TRUE(in.certificate);
  ASSERT_EQ(in.certificate->values.size(), 1u);
  EXPECT_NEAR(in.certificate->values[0], 1.0, 1e-14);

  const Verdict out = nnls_membership(cone, -e11e11());
  ASSERT_TRUE(out.is_not_member());
  ASSERT_TRUE(out.witness);
  // The residual direction is normalised; its value on the query is -1.
  EXPECT_NEAR(out.witness->value, -1.0, 1e-12);
  EXPECT_NEAR(recheck(*out.witness, -e11e11()), out.witness->value, 1e-12);
  EXPECT_GE(real_pairing(out.witness->matrix, e11e11()), -1e-12);
}

TEST(NnlsMembership, AverageOfGenerators) {
  Rng rng(3);
  std::vector<CMat> gens;
  CMat avg = CMat::Zero(4, 4);
  for (int i = 0; i < 40; ++i) {
    gens.push_back(ad_map(random_gaussian(2, 2, rng)).choi());
    avg += gens.back() / 40.0;
  }
  const Verdict v = nnls_membership(GenCone(4, gens), avg);
  ASSERT_TRUE(v.is_member());
  EXPECT_LE(v.certificate->residual, 1e-10);
}

// A refutation separates: the witness pairs nonnegatively with every
// generator and negatively with the query.
TEST(NnlsMembership, WitnessSeparates) {
  Rng rng(4);
  std::vector<CMat> gens;
  for (int i = 0; i < 6; ++i) gens.push_back(ad_map(random_gaussian(2, 2, rng)).choi());
  const GenCone cone(4, gens);
  int refuted = 0;
  for (int t = 0; t < 30; ++t) {
    const CMat x = random_hermitian(4, rng);
    const Verdict v = nnls_membership(cone, x);
    if (!v.is_not_member()) continue;
    ++refuted;
    EXPECT_LT(recheck(*v.witness, x), 0.0);
    for (const CMat& g : gens) EXPECT_GE(real_pairing(v.witness->matrix, g), -1e-9);
  }
  EXPECT_GT(refuted, 20);
}

TEST(GenCone, Validation) {
  CMat bad = CMat::Zero(4, 4);
  bad(0, 1) = 1.0;
  EXPECT_THROW(GenCone(4, {bad}), Error);
  EXPECT_THROW(GenCone(4, {CMat::Zero(4, 4)}), Error);
  EXPECT_THROW(GenCone(4, {identity(3)}), Error);
  try {
    nnls_membership(GenCone(), identity(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCone);
  }
}

TEST(DualPairing, Examples) {
  const Verdict v = dual_pairing_test({identity_map(2)}, identity_map(2));
  EXPECT_TRUE(v.is_member());
  const LinMap psi = LinMap::from_choi(identity(4) - max_entangled(2));
  const Verdict w = dual_pairing_test({identity_map(2)}, psi);
  ASSERT_TRUE(w.is_not_member());
  EXPECT_NEAR(w.margin, -2.0, 1e-12);
  EXPECT_THROW(dual_pairing_test({}, psi), Error);
}

}  // namespace
}  // namespace conecalc
