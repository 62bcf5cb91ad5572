#include "spe/coherence.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace spe;

namespace {

constexpr double kPi = std::numbers::pi;

const SpectralProfile kFiltered(3547.24e12, 6.5e12, 0.985);
const SpectralProfile kUnfiltered(3611.4e12, 134e12, 0.932);

}  // namespace

TEST(SpectralProfile, RejectsInvalidWidths) {
  EXPECT_THROW(SpectralProfile(3.5e15, 0.0), Error);
  EXPECT_THROW(SpectralProfile(3.5e15, -1.0), Error);
  EXPECT_THROW(SpectralProfile(1e13, 2e12), Error);  // omega0 / sigma <= 10
}

TEST(ProfileFromFilter, CenterFrequency) {
  const auto p = profile_from_filter(531e-9, 1e-9);
  EXPECT_NEAR(p.omega0() / 1e12, 3547.0, 1.0);
  EXPECT_NEAR(p.center_wavelength(), 531e-9, 1e-18);
}

TEST(ProfileFromFilter, WidthScalesAsInverseSquareWavelength) {
  const auto a = profile_from_filter(500e-9, 1e-9);
  const auto b = profile_from_filter(1000e-9, 1e-9);
  EXPECT_NEAR(a.sigma_omega() / b.sigma_omega(), 4.0, 1e-12);
}

TEST(ProfileFromFilter, RejectsBadFilters) {
  for (auto [l, b] : {std::pair{0.0, 1e-9}, {531e-9, 0.0}, {531e-9, -1e-9}, {531e-9, 100e-9}}) {
    try {
      profile_from_filter(l, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidFilter);
    }
  }
}

TEST(ProfileFromFilter, DirectProfileInputForUnfilteredLed) {
  EXPECT_DOUBLE_EQ(kUnfiltered.sigma_omega(), 134e12);
}

TEST(CoherenceScales, FilteredLed) {
  const auto s = coherence_scales(kFiltered);
  EXPECT_NEAR(s.tau_c, 154e-15, 1e-15);
  EXPECT_NEAR(s.l_c, 46.0e-6, 0.3e-6);
}

TEST(CoherenceScales, UnfilteredLed) {
  const auto s = coherence_scales(kUnfiltered);
  // Fitted sigma carries a 7% error; 7.46 fs sits inside it.
  EXPECT_NEAR(s.tau_c, 7.46e-15, 0.01e-15);
  EXPECT_NEAR(s.l_c, 2.23e-6, 0.05e-6);
}

TEST(CoherenceScales, ReciprocalLaw) {
  const SpectralProfile doubled(kFiltered.omega0(), 2 * kFiltered.sigma_omega());
  EXPECT_NEAR(coherence_scales(doubled).tau_c, coherence_scales(kFiltered).tau_c / 2, 1e-27);
}

TEST(Epsilon, ClosedFormValues) {
  EXPECT_EQ(epsilon_of_delay(0.0, kFiltered), 0.0);
  EXPECT_NEAR(epsilon_of_delay(1.0 / kFiltered.sigma_omega(), kFiltered), 0.3934693402873666, 1e-15);
  EXPECT_NEAR(epsilon_of_path_difference(coherence_scales(kFiltered).l_c, kFiltered),
              0.6321205588285577, 1e-15);
}

TEST(Epsilon, EvenMonotoneBounded) {
  const double tau = 1.0 / kFiltered.sigma_omega();
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = i * 0.05 * tau;
    const double e = epsilon_of_delay(t, kFiltered);
    EXPECT_GE(e, prev);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
    EXPECT_EQ(e, epsilon_of_delay(-t, kFiltered));
    prev = e;
  }
  EXPECT_EQ(epsilon_of_delay(1.0, kFiltered), 1.0);
}

TEST(RhoEpsilon, PureAndMixedEndpoints) {
  EXPECT_NEAR(rho_epsilon(0.0).purity(), 1.0, 1e-12);
  Eigen::Vector4d ev = rho_epsilon(1.0).eigenvalues();
  std::sort(ev.data(), ev.data() + 4);
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.0, 1e-12);
  EXPECT_NEAR(ev[2], 0.5, 1e-12);
  EXPECT_NEAR(ev[3], 0.5, 1e-12);
}

TEST(RhoEpsilon, DiagonalIndependentOfEpsilon) {
  for (double eps : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    for (double xi : {0.0, 0.7, -2.0}) {
      const auto p = channel_probabilities(rho_epsilon(eps, xi));
      EXPECT_NEAR(p.p_0V(), 0.0, 1e-12);
      EXPECT_NEAR(p.p_0H(), 0.5, 1e-12);
      EXPECT_NEAR(p.p_1V(), 0.5, 1e-12);
      EXPECT_NEAR(p.p_1H(), 0.0, 1e-12);
    }
  }
}

TEST(RhoEpsilon, RejectsOutOfRange) {
  try {
    rho_epsilon(1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EpsOutOfRange);
  }
}

TEST(RhoEpsilon, DecoherenceVisibleAfterMomentumRotation) {
  // With phi = 0 the pure and mixed states give identical probabilities for
  // every theta; the momentum rotation is what exposes the coherence.
  const MeasurementSetting no_momentum(0.0, kPi / 8);
  const auto p_pure0 = channel_probabilities(prepare_state(rho_epsilon(0.0), no_momentum));
  const auto p_mixed0 = channel_probabilities(prepare_state(rho_epsilon(1.0), no_momentum));
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(p_pure0[c], p_mixed0[c], 1e-12);

  const MeasurementSetting rotated(kPi / 2, kPi / 8);
  const auto p_pure = channel_probabilities(prepare_state(rho_epsilon(0.0), rotated));
  const auto p_mixed = channel_probabilities(prepare_state(rho_epsilon(1.0), rotated));
  double gap = 0.0;
  for (int c = 0; c < 4; ++c) gap = std::max(gap, std::abs(p_pure[c] - p_mixed[c]));
  // cos^2(pi/8)/2 - 1/4
  EXPECT_NEAR(gap, std::pow(std::cos(kPi / 8), 2) / 2 - 0.25, 1e-12);
  EXPECT_GT(gap, 0.1);
}

TEST(EffectiveState, Endpoints) {
  const auto rho = rho_epsilon(0.3);
  EXPECT_LT((effective_state(rho, 1.0).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((effective_state(rho, 0.0).matrix() - Matrix4c<double>::Identity() / 4.0).cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_THROW(effective_state(rho, -0.1), Error);
}

TEST(EffectiveState, PurityExpansion) {
  EXPECT_NEAR(effective_state(rho_epsilon(0.0), 0.95).purity(), 0.926875, 1e-12);
}

TEST(PreciseDetection, OpticalContact) {
  const Matrix2c<double> id = Matrix2c<double>::Identity();
  EXPECT_NEAR(precise_detection_probability(0, id, 0.0, 0.0, kFiltered), 1.0, 1e-15);
  EXPECT_NEAR(precise_detection_probability(1, id, 0.0, 0.0, kFiltered), 0.0, 1e-15);
}

TEST(PreciseDetection, OrthogonalPolarizationHasNoInterference) {
  const Matrix2c<double> id = Matrix2c<double>::Identity();
  for (double t : {0.0, 1e-14, 3e-13}) {
    EXPECT_NEAR(precise_detection_probability(0, id, t, kPi / 2, kFiltered), 0.5, 1e-15);
    EXPECT_NEAR(precise_detection_probability(1, id, t, kPi / 2, kFiltered), 0.5, 1e-15);
  }
}

TEST(PreciseDetection, EnvelopeSuppression) {
  const Matrix2c<double> id = Matrix2c<double>::Identity();
  const double t = 10.0 / kFiltered.sigma_omega();
  EXPECT_NEAR(precise_detection_probability(0, id, t, 0.0, kFiltered), 0.5, std::exp(-50.0));
}

TEST(PreciseDetection, RejectsBadDetector) {
  EXPECT_THROW(precise_detection_probability(2, Matrix2c<double>::Identity(), 0, 0, kFiltered), Error);
}

TEST(PreciseDetection, AnalyticMatchesQuadrature) {
  // Arbitrary rank-1 polarization projectors, including complex ones.
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector2cd v(spe::testing::gaussian_complex(), spe::testing::gaussian_complex());
    v.normalize();
    const Matrix2c<double> q = v * v.adjoint();
    const double theta = spe::testing::uniform(0, kPi);
    for (int i = 0; i < 50; ++i) {
      const double t = (5.0 * i / 49.0) / kFiltered.sigma_omega();
      for (int j : {0, 1}) {
        const double a = precise_detection_probability(j, q, t, theta, kFiltered);
        const double b =
            precise_detection_probability(j, q, t, theta, kFiltered, IntegralRoute::Quadrature);
        EXPECT_NEAR(a, b, 1e-6) << "T sigma = " << t * kFiltered.sigma_omega();
      }
    }
  }
}

TEST(Quadrature, ReportsFailureWhenToleranceUnreachable) {
  try {
    interference_integral_quadrature(3e-13, kFiltered, 1e-30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureFailure);
  }
}

TEST(Quadrature, PolynomialsAreExact) {
  auto r = integrate_adaptive<double>([](double x) { return x * x * x - 2 * x + 1; }, -1.0, 2.0, 1e-14);
  EXPECT_NEAR(r.value, 3.75, 1e-13);
  EXPECT_TRUE(r.converged);
}

TEST(ModelConsistency, FittedAmplitudeRecoversOneMinusEpsilon) {
  for (int i = 0; i <= 20; ++i) {
    const double t = (4.0 * i / 20.0) / kFiltered.sigma_omega();
    const double amp = fitted_interference_amplitude(t, kFiltered);
    EXPECT_NEAR(amp, 1.0 - epsilon_of_delay(t, kFiltered), 1e-3);
  }
}

TEST(Autocorrelation, ContactAndFarField) {
  const auto curve = autocorrelation_curve(kFiltered, {0.0, 10e-3});
  EXPECT_NEAR(curve[0].probability, 1.0, 1e-15);
  EXPECT_NEAR(curve[1].probability, 0.5, 1e-12);
}

TEST(Autocorrelation, FringePeriodIsWavelength) {
  const double lambda = kFiltered.center_wavelength();
  EXPECT_NEAR(lambda, 531e-9, 0.1e-9);
  // Near contact, maxima repeat every lambda and a minimum sits half-way.
  const auto curve = autocorrelation_curve(kFiltered, {0.0, lambda / 2, lambda, 2 * lambda});
  EXPECT_NEAR(curve[1].probability, 0.0, 1e-3);
  EXPECT_NEAR(curve[2].probability, 1.0, 1e-3);
  EXPECT_NEAR(curve[3].probability, 1.0, 1e-3);
}

TEST(Autocorrelation, UnfilteredDecaysWithinFewMicrons) {
  const double lc = coherence_scales(kUnfiltered).l_c;
  const auto unfiltered = autocorrelation_curve(kUnfiltered, {3 * lc});
  EXPECT_LT(std::abs(unfiltered[0].probability - 0.5), 0.5 * std::exp(-4.5) + 1e-12);
  // The filtered envelope at 20 um is still exp(-(20/46.1)^2/2) ~ 0.91.
  EXPECT_GT(coherence_envelope(20e-6 / kSpeedOfLight, kFiltered), 0.9);
}
