#pragma once
// CHSH machinery: correlation estimators, S assembly, the canonical
// alpha-parametrized settings, closed-form curves and Monte Carlo sweeps.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "spe/coherence.hpp"
#include "spe/detector.hpp"
#include "spe/optics.hpp"
#include "spe/photostats.hpp"
#include "spe/rng.hpp"

namespace spe {

/// Settings (a,b), (a,b'), (a',b), (a',b') with S = E1 - E2 + E3 + E4.
/// For the alpha-canonical set the Bloch angles (phi, 2 theta) are
/// (0, a), (0, 3a), (2a, a), (2a, 3a).
struct ChshSettingSet {
  std::array<MeasurementSetting, 4> settings;
  static constexpr std::array<int, 4> signs{+1, -1, +1, +1};
};

ChshSettingSet chsh_settings(double alpha, double residual_xi = 0.0);

enum class Estimator {
  FourChannel,  // all four channels
  TwoChannel,   // only 0H and 0V, using the symmetry N_1V <-> N_0H, N_1H <-> N_0V
};

struct CorrelationEstimate {
  double value;
  double std_error;  // multinomial (binomial on agree/disagree) standard error
};

/// E = (N_1V + N_0H - N_0V - N_1H) / N_tot. Throws EmptyCounts on zero total.
double correlation_from_counts(const ChannelCounts& c, Estimator est = Estimator::FourChannel);

CorrelationEstimate estimate_correlation(const ChannelCounts& c,
                                         Estimator est = Estimator::FourChannel);

double s_from_correlations(double e_ab, double e_ab2, double e_a2b, double e_a2b2);

/// eta [(1 - eps)(3 cos a - cos 3a) + eps (2 cos^3 a - 2 sin^2 a cos 3a)].
double theory_s(double alpha, double eps, double eta);

/// max over alpha of |theory_s(alpha, eps, eta)|: a 4096-point grid over one
/// period, then golden-section refinement around the best grid point.
double max_abs_theory_s(double eps, double eta);

/// S assembled from exact channel probabilities of `rho` prepared at the
/// four canonical settings.
double pipeline_s(const TwoQubitDensity& rho, double alpha);

struct FringeSample {
  double phi;
  double counts;
};

/// (max - min) / (max + min) over a sweep covering at least one period.
double visibility(const std::vector<FringeSample>& fringe);

/// Visibility from a least-squares fit counts = c0 + c1 cos phi + c2 sin phi.
double fitted_visibility(const std::vector<FringeSample>& fringe);

/// Simulated N_0H(phi) at fixed theta over `phi_grid`.
std::vector<FringeSample> simulate_fringe(const TwoQubitDensity& rho, double theta,
                                          const std::vector<double>& phi_grid,
                                          const SourceConfig& src, const DetectorConfig& det,
                                          const RngStream& rng);

enum class ErrorModel {
  Multinomial,  // per-setting standard error propagated in quadrature
  Repeats,      // standard deviation of per-repeat S over sqrt(repeats)
};

struct SweepOptions {
  std::vector<double> alpha_grid;
  double eps = 0.0;
  std::optional<double> eta;
  double residual_xi = 0.0;
  std::uint64_t photons_per_setting = 100000;
  int repeats = 1;
  Estimator estimator = Estimator::FourChannel;
  ErrorModel error_model = ErrorModel::Multinomial;
  unsigned workers = 1;
};

struct SweepPoint {
  double alpha;
  double theta;  // alpha / 2, the HWP-side parametrization with phi = 0
  double s;
  double s_err;
  std::array<double, 4> e;
  std::array<ChannelCounts, 4> counts;
};

struct SweepResult {
  std::vector<SweepPoint> points;
};

/// Simulates every (point, setting, repeat) on its own substream
/// rng.substream(point).substream(setting).substream(repeat), so results do
/// not depend on the worker count. Each repeat runs for
/// photons_per_setting / repeats / src.mean_rate seconds, overriding det.duration.
SweepResult run_chsh_sweep(const SweepOptions& opts, const SourceConfig& src,
                           const DetectorConfig& det, const RngStream& rng);

}  // namespace spe
