#include "spe/qstate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "spe/coherence.hpp"
#include "spe/optics.hpp"
#include "test_support.hpp"

using namespace spe;
using spe::testing::random_density;
using spe::testing::random_unitary2;

namespace {

Vector4c<double> amps(double a, double b, double c, double d) {
  Vector4c<double> v;
  v << a, b, c, d;
  return v;
}

TwoQubitDensity bell_projector() { return TwoQubitDensity::pure(generate_bell_state(0.0)); }

}  // namespace

TEST(ValidateState, KeepsNormalizedInput) {
  const auto s = validate_state<double>(amps(1, 0, 0, 0));
  EXPECT_NEAR(std::abs(s[0] - 1.0), 0.0, 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(s[i], 0.0);
}

TEST(ValidateState, Normalizes) {
  const auto s = validate_state<double>(amps(1, 1, 0, 0));
  EXPECT_NEAR(s[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amplitudes().squaredNorm(), 1.0, 1e-12);
}

TEST(ValidateState, RejectsZeroVector) {
  try {
    validate_state<double>(amps(0, 0, 0, 0));
    FAIL() << "expected ZeroNorm";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroNorm);
  }
  EXPECT_THROW(validate_state<double>(amps(1e-16, 0, 0, 0)), Error);
  EXPECT_THROW(validate_state<double>(amps(NAN, 1, 0, 0)), Error);
}

TEST(Density, RejectsInvalidMatrices) {
  Matrix4c<double> m = Matrix4c<double>::Identity() / 2.0;
  EXPECT_THROW(TwoQubitDensity::from_matrix(m), Error);  // trace 2
  m = Matrix4c<double>::Zero();
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(TwoQubitDensity::from_matrix(m), Error);  // negative eigenvalue
  m = Matrix4c<double>::Identity() / 4.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(TwoQubitDensity::from_matrix(m), Error);  // not Hermitian
}

TEST(Density, ClampsTinyNegativeEigenvalues) {
  Matrix4c<double> m = Matrix4c<double>::Zero();
  m(0, 0) = 1.0 + 5e-11;
  m(1, 1) = -5e-11;
  const auto rho = TwoQubitDensity::from_matrix(m);
  EXPECT_GE(rho.eigenvalues().minCoeff(), 0.0);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
}

TEST(LocalUnitary, RejectsNonUnitaryBlocks) {
  Matrix2c<double> bad = Matrix2c<double>::Identity() * 1.01;
  EXPECT_THROW(LocalUnitary(bad, Matrix2c<double>::Identity()), Error);
  EXPECT_THROW(LocalUnitary(Matrix2c<double>::Identity(), bad), Error);
}

TEST(ApplyLocalUnitary, IdentityLeavesStateUnchanged) {
  const auto rho = random_density();
  const auto out = apply_local_unitary(LocalUnitary::identity(), rho);
  EXPECT_LT((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyLocalUnitary, QuarterTurnMapsVerticalToHorizontal) {
  const auto rho = TwoQubitDensity::pure(TwoQubitState::basis(k0V));
  const LocalUnitary u(Matrix2c<double>::Identity(), polarization_rotation_unitary(M_PI / 2));
  const auto out = apply_local_unitary(u, rho);
  Matrix4c<double> expected = Matrix4c<double>::Zero();
  expected(k0H, k0H) = 1.0;
  EXPECT_LT((out.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyLocalUnitary, PreservesTraceHermiticityAndSpectrum) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = random_density();
    const LocalUnitary u(random_unitary2(), random_unitary2());
    const auto out = apply_local_unitary(u, rho);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LT((out.matrix() - out.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((out.eigenvalues() - rho.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ChannelProbabilities, BellStateDiagonal) {
  const auto p = channel_probabilities(bell_projector());
  EXPECT_NEAR(p.p_0V(), 0.0, 1e-15);
  EXPECT_NEAR(p.p_0H(), 0.5, 1e-15);
  EXPECT_NEAR(p.p_1V(), 0.5, 1e-15);
  EXPECT_NEAR(p.p_1H(), 0.0, 1e-15);
}

TEST(ChannelProbabilities, MaximallyMixedIsUniform) {
  const auto p = channel_probabilities(TwoQubitDensity::maximally_mixed());
  for (double v : p.values()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(ChannelProbabilities, MixedStateDiagonal) {
  const auto p = channel_probabilities(rho_mixed());
  EXPECT_DOUBLE_EQ(p.p_0V(), 0.0);
  EXPECT_DOUBLE_EQ(p.p_0H(), 0.5);
  EXPECT_DOUBLE_EQ(p.p_1V(), 0.5);
  EXPECT_DOUBLE_EQ(p.p_1H(), 0.0);
}

TEST(ChannelProbabilities, CompletenessAndPurityBound) {
  for (int trial = 0; trial < 500; ++trial) {
    const auto rho = random_density();
    const auto p = channel_probabilities(rho);
    double sum = 0.0;
    for (double v : p.values()) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_GE(rho.purity(), 0.25 - 1e-12);
    EXPECT_LE(rho.purity(), 1.0 + 1e-12);
  }
  EXPECT_NEAR(TwoQubitDensity::maximally_mixed().purity(), 0.25, 1e-15);
  EXPECT_NEAR(bell_projector().purity(), 1.0, 1e-15);
}

TEST(ConvexMix, Endpoints) {
  const auto a = random_density();
  const auto b = random_density();
  EXPECT_LT((convex_mix(a, b, 0.0).matrix() - a.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((convex_mix(a, b, 1.0).matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ConvexMix, HalfOfOrthogonalPureStates) {
  const auto a = TwoQubitDensity::pure(TwoQubitState::basis(k0V));
  const auto b = TwoQubitDensity::pure(TwoQubitState::basis(k1H));
  Eigen::Vector4d ev = convex_mix(a, b, 0.5).eigenvalues();
  std::sort(ev.data(), ev.data() + 4);
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.0, 1e-12);
  EXPECT_NEAR(ev[2], 0.5, 1e-12);
  EXPECT_NEAR(ev[3], 0.5, 1e-12);
}

TEST(ConvexMix, RejectsWeightOutsideUnitInterval) {
  const auto a = random_density();
  for (double w : {-0.01, 1.01, double(NAN)}) {
    try {
      convex_mix(a, a, w);
      FAIL() << "expected WeightOutOfRange for " << w;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::WeightOutOfRange);
    }
  }
}

TEST(ScalarTemplates, LongDoubleAndFloatInstantiate) {
  const auto sl = validate_state<long double>(Vector4c<long double>(1, 1, 1, 1));
  EXPECT_NEAR(static_cast<double>(sl.amplitudes().squaredNorm()), 1.0, 1e-15);
  const auto rf = BasicTwoQubitDensity<float>::pure(validate_state<float>(Vector4c<float>(0, 1, 1, 0)));
  EXPECT_NEAR(channel_probabilities(rf).p_0H(), 0.5f, 1e-6f);
}
