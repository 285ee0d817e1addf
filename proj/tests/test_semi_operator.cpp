#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "semihilbert/instance.hpp"
#include "semihilbert/semi_operator.hpp"

using namespace semihilbert;

namespace {

const ComplexMatrix kSwap{{0.0, 1.0}, {1.0, 0.0}};
const ComplexMatrix kNil{{0.0, 1.0}, {0.0, 0.0}};

MetricPtr diag(std::initializer_list<double> d) { return new_metric(ComplexMatrix::diagonal(d)); }

}  // namespace

TEST(Membership, OperatorLeavingNullSpace) {
  const SemiOperator op(diag({1.0, 0.0}), kSwap);
  EXPECT_FALSE(op.in_half());
  EXPECT_FALSE(op.in_full());
  EXPECT_THROW(op.sharp(), Error);
}

TEST(Membership, InvertibleMetricAdmitsEverything) {
  const SemiOperator op(diag({2.0, 1.0}), oracle::random_matrix(3, 2, 2));
  EXPECT_TRUE(op.in_half());
  EXPECT_TRUE(op.in_full());
}

TEST(Membership, DiagonalPreservesNullSpace) {
  for (double a : {-2.0, 0.0, 3.5})
    for (double b : {0.0, 1.0, -7.0}) {
      const SemiOperator op(diag({1.0, 0.0}), ComplexMatrix::diagonal({a, b}));
      EXPECT_TRUE(op.in_half());
      EXPECT_TRUE(op.in_full());
    }
}

TEST(Membership, TestsAgreeOnGeneratedAndPerturbedOperators) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = gen_instance(seed, 4, 1 + seed % 4);
    const SemiOperator good(inst.metric, inst.t);
    EXPECT_TRUE(good.in_half());
    // A random full operator leaves N(A) whenever N(A) is nontrivial.
    const SemiOperator bad(inst.metric, oracle::random_matrix(seed, 4, 4));
    EXPECT_EQ(bad.in_half(), inst.rank == 4);
    EXPECT_EQ(bad.in_half(), bad.in_full());
  }
}

TEST(Membership, DimensionMismatch) {
  EXPECT_THROW(SemiOperator(diag({1.0, 1.0}), ComplexMatrix::identity(3)), Error);
}

TEST(Sharp, IdentityMetricGivesAdjoint) {
  const ComplexMatrix t = oracle::random_matrix(4, 3, 3);
  const SemiOperator op(new_metric(ComplexMatrix::identity(3)), t);
  EXPECT_LE(frobenius_norm(op.sharp() - t.adjoint()), 1e-14);
}

TEST(Sharp, WeightedNilpotent) {
  const SemiOperator op(diag({2.0, 1.0}), kNil);
  const ComplexMatrix expected{{0.0, 0.0}, {2.0, 0.0}};
  EXPECT_LE(frobenius_norm(op.sharp() - expected), 1e-14);
}

TEST(Sharp, ProjectorResidual) {
  const MetricPtr m = new_metric(oracle::random_psd(6, 4, 2));
  const SemiOperator op(m, m->projector());
  const ComplexMatrix& a = m->matrix();
  EXPECT_LE(frobenius_norm(a * op.sharp() - op.matrix().adjoint() * a), 1e-10);
}

TEST(Sharp, DefiningIdentitiesOnGeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = gen_instance(seed, 5, 1 + seed % 5);
    const Metric& m = *inst.metric;
    const SemiOperator t(inst.metric, inst.t);
    const SemiOperator s(inst.metric, inst.s);
    const ComplexMatrix& a = m.matrix();
    const double scale = 1.0 + frobenius_norm(a) * frobenius_norm(inst.t);
    EXPECT_LE(frobenius_norm(a * t.sharp() - inst.t.adjoint() * a), tol::kMoorePenrose * scale * 10);
    // R(T^#) in R(A)
    EXPECT_LE(frobenius_norm(t.sharp() - m.projector() * t.sharp()), 1e-9);
    // (TS)^# = S^# T^#
    const SemiOperator ts(inst.metric, inst.t * inst.s);
    EXPECT_LE(frobenius_norm(ts.sharp() - s.sharp() * t.sharp()), 1e-9 * (1.0 + frobenius_norm(ts.sharp())));
  }
}

TEST(Sharp, DoubleSharpIsCompressionByProjector) {
  EXPECT_LE(double_sharp_identity_check(SemiOperator(new_metric(ComplexMatrix::identity(2)), kNil)), 1e-14);
  EXPECT_LE(double_sharp_identity_check(SemiOperator(diag({1.0, 0.0}), ComplexMatrix::diagonal({3.0, -2.0}))),
            1e-10);
  const Instance inst = gen_instance(9, 4, 2);
  EXPECT_LE(double_sharp_identity_check(SemiOperator(inst.metric, inst.x)), 1e-9);
}

TEST(Seminorm, IdentityMetricIsOperatorNorm) {
  const ComplexMatrix t = oracle::random_matrix(12, 4, 4);
  const SemiOperator op(new_metric(ComplexMatrix::identity(4)), t);
  EXPECT_NEAR(a_seminorm_op(op).value(), operator_norm_2(t), 1e-13);
}

TEST(Seminorm, WeightedNilpotentWithSamplingCrossCheck) {
  const MetricPtr m = diag({2.0, 1.0});
  const SemiOperator op(m, kNil);
  EXPECT_NEAR(a_seminorm_op(op).value(), std::sqrt(2.0), 1e-14);
  // max ||T x||_A / ||x||_A over sampled x never exceeds the value and gets close.
  RandomStream rng(4, "ratio");
  double best = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const Vector x = rng.complex_normal_vector(2);
    const double nx = a_norm_vec(*m, x);
    if (nx == 0.0) continue;
    best = std::max(best, a_norm_vec(*m, kNil * x) / nx);
  }
  EXPECT_LE(best, std::sqrt(2.0) + 1e-12);
  EXPECT_GT(best, std::sqrt(2.0) - 1e-3);
}

TEST(Seminorm, UnboundedOperator) {
  const ExtendedRadius n = a_seminorm_op(SemiOperator(diag({1.0, 0.0}), kSwap));
  EXPECT_TRUE(n.is_unbounded());
  EXPECT_EQ(n.to_string(), "unbounded");
  EXPECT_THROW(n.value(), Error);
}

TEST(Seminorm, Submultiplicative) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = gen_instance(seed, 4, 1 + seed % 4);
    const double nt = a_seminorm_op(SemiOperator(inst.metric, inst.t)).value();
    const double ns = a_seminorm_op(SemiOperator(inst.metric, inst.s)).value();
    const double nts = a_seminorm_op(SemiOperator(inst.metric, inst.t * inst.s)).value();
    EXPECT_LE(nts, nt * ns * (1.0 + 1e-12) + 1e-12);
  }
}

TEST(Radius, IdentityMetricNilpotent) {
  const SemiOperator op(new_metric(ComplexMatrix::identity(2)), kNil);
  EXPECT_NEAR(a_numerical_radius(op).value(), 0.5, 1e-12);
  EXPECT_NEAR(a_numerical_radius(op, radius::ThetaSup{}).value(), 0.5, 1e-10);
}

TEST(Radius, UnboundedIsExact) {
  const SemiOperator op(diag({1.0, 0.0}), kSwap);
  EXPECT_TRUE(a_numerical_radius(op).is_unbounded());
  EXPECT_TRUE(a_numerical_radius(op, radius::Sampling{}).is_unbounded());
  EXPECT_EQ(a_numerical_radius(op), ExtendedRadius::unbounded());
}

TEST(Radius, WeightedNilpotent) {
  const SemiOperator op(diag({2.0, 1.0}), kNil);
  EXPECT_NEAR(a_numerical_radius(op).value(), std::sqrt(2.0) / 2.0, 1e-12);
  const double sampled = a_numerical_radius(op, radius::Sampling{100000, 3}).value();
  EXPECT_LE(sampled, std::sqrt(2.0) / 2.0 + 1e-12);
  EXPECT_GT(sampled, std::sqrt(2.0) / 2.0 - 1e-2);
}

TEST(Radius, SelfadjointRadiusEqualsSeminorm) {
  // T = A^dagger H A with H Hermitian makes A T = P H A... use T = T0^# T0 + T0 T0^#.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_instance(seed, 4, 1 + seed % 4);
    const SemiOperator t0(inst.metric, inst.t);
    const SemiOperator t(inst.metric, t0.sharp() + inst.t);
    ASSERT_TRUE(is_a_selfadjoint(t));
    const double w = a_numerical_radius(t).value();
    EXPECT_NEAR(w, a_seminorm_op(t).value(), 1e-8 * (1.0 + w));
  }
}

TEST(Radius, MethodsAgree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_instance(seed, 3, 1 + seed % 3);
    const SemiOperator op(inst.metric, inst.t);
    const double c = a_numerical_radius(op).value();
    const double th = a_numerical_radius(op, radius::ThetaSup{}).value();
    const double sm = a_numerical_radius(op, radius::Sampling{20000, seed}).value();
    EXPECT_NEAR(c, th, 1e-6 * (1.0 + c)) << seed;
    EXPECT_LE(sm, c + 1e-10) << seed;
  }
}

TEST(Radius, ZeroMetric) {
  const SemiOperator op(new_metric(ComplexMatrix(2, 2)), kSwap);
  EXPECT_TRUE(op.in_half());
  EXPECT_EQ(a_numerical_radius(op).value(), 0.0);
  EXPECT_EQ(a_seminorm_op(op).value(), 0.0);
}

TEST(Predicates, IdentityMetric) {
  const MetricPtr id = new_metric(ComplexMatrix::identity(2));
  EXPECT_TRUE(is_a_selfadjoint(SemiOperator(id, ComplexMatrix{{1.0, cplx(0, 1)}, {cplx(0, -1), 2.0}})));
  EXPECT_TRUE(is_a_positive(SemiOperator(id, ComplexMatrix{{2.0, 1.0}, {1.0, 2.0}})));
  EXPECT_FALSE(is_a_positive(SemiOperator(id, ComplexMatrix{{1.0, 2.0}, {2.0, 1.0}})));
  EXPECT_FALSE(is_a_selfadjoint(SemiOperator(id, kNil)));
}

TEST(Predicates, DegenerateMetricSelfadjoint) {
  const SemiOperator op(diag({1.0, 0.0}), ComplexMatrix{{1.0, 0.0}, {5.0, 2.0}});
  EXPECT_TRUE(is_a_selfadjoint(op));
}

TEST(Predicates, SharpTimesOperatorIsPositive) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = gen_instance(seed, 4, 1 + seed % 4);
    const SemiOperator t(inst.metric, inst.t);
    EXPECT_TRUE(is_a_positive(SemiOperator(inst.metric, t.sharp() * inst.t))) << seed;
  }
}

TEST(Predicates, Unitary) {
  const MetricPtr id = new_metric(ComplexMatrix::identity(2));
  const double c = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(is_a_unitary(SemiOperator(id, ComplexMatrix{{c, c}, {-c, c}})));
  EXPECT_FALSE(is_a_unitary(SemiOperator(id, ComplexMatrix::identity(2) * cplx(2.0))));
  EXPECT_FALSE(is_a_unitary(SemiOperator(diag({1.0, 0.0}), kSwap)));
}

TEST(RandomAUnitary, IdentityMetricGivesUnitary) {
  const ComplexMatrix u = random_a_unitary(*new_metric(ComplexMatrix::identity(4)), 5);
  EXPECT_LE(frobenius_norm(u.adjoint() * u - ComplexMatrix::identity(4)), 1e-10);
}

TEST(RandomAUnitary, RankOneMetric) {
  const MetricPtr m = diag({1.0, 0.0});
  const ComplexMatrix u = random_a_unitary(*m, 8);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(0, 1)) + std::abs(u(1, 0)) + std::abs(u(1, 1)), 0.0, 1e-12);
  EXPECT_TRUE(is_a_unitary(SemiOperator(m, u)));
}

TEST(RandomAUnitary, PreservesSeminormAndRadius) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = gen_instance(seed, 5, 1 + seed % 5);
    const ComplexMatrix u = random_a_unitary(*inst.metric, seed);
    const SemiOperator uop(inst.metric, u);
    ASSERT_TRUE(is_a_unitary(uop)) << seed;
    RandomStream rng(seed, "x");
    for (int k = 0; k < 10; ++k) {
      const Vector x = rng.complex_normal_vector(5);
      EXPECT_NEAR(a_norm_vec(*inst.metric, u * x), a_norm_vec(*inst.metric, x), 1e-10);
    }
    const double w = a_numerical_radius(SemiOperator(inst.metric, inst.t)).value();
    const double wu = a_numerical_radius(SemiOperator(inst.metric, uop.sharp() * inst.t * u)).value();
    EXPECT_NEAR(w, wu, 1e-7 * (1.0 + w)) << seed;
  }
}
