#include "spe/bell.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace spe {

ChshSettingSet chsh_settings(double alpha, double residual_xi) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::ParamOutOfRange, "alpha must be finite");
  auto at = [&](double phi, double two_theta) {
    return MeasurementSetting(phi, two_theta / 2.0, residual_xi);
  };
  return {{at(0.0, alpha), at(0.0, 3.0 * alpha), at(2.0 * alpha, alpha),
           at(2.0 * alpha, 3.0 * alpha)}};
}

double correlation_from_counts(const ChannelCounts& c, Estimator est) {
  return estimate_correlation(c, est).value;
}

CorrelationEstimate estimate_correlation(const ChannelCounts& c, Estimator est) {
  double agree, disagree;
  if (est == Estimator::FourChannel) {
    agree = static_cast<double>(c[k1V] + c[k0H]);
    disagree = static_cast<double>(c[k0V] + c[k1H]);
  } else {
    agree = static_cast<double>(c[k0H]);
    disagree = static_cast<double>(c[k0V]);
  }
  const double total = agree + disagree;
  if (total <= 0.0) throw Error(ErrorCode::EmptyCounts, "no counts in the estimator channels");
  const double e = (agree - disagree) / total;
  return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / total)};
}

double s_from_correlations(double e_ab, double e_ab2, double e_a2b, double e_a2b2) {
  return e_ab - e_ab2 + e_a2b + e_a2b2;
}

double theory_s(double alpha, double eps, double eta) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::ParamOutOfRange, "alpha must be finite");
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "eps outside [0,1]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "eta outside [0,1]");
  const double c = std::cos(alpha), s = std::sin(alpha), c3 = std::cos(3.0 * alpha);
  const double entangled = 3.0 * c - c3;
  const double mixed = 2.0 * c * c * c - 2.0 * s * s * c3;
  return eta * ((1.0 - eps) * entangled + eps * mixed);
}

double max_abs_theory_s(double eps, double eta) {
  constexpr int kGrid = 4096;
  const double h = 2.0 * std::numbers::pi / kGrid;
  auto f = [&](double a) { return std::abs(theory_s(a, eps, eta)); };
  int best = 0;
  for (int i = 1; i < kGrid; ++i)
    if (f(i * h) > f(best * h)) best = i;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best - 1) * h, hi = (best + 1) * h;
  while (hi - lo > 1e-12) {
    const double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    if (f(c) > f(d))
      hi = d;
    else
      lo = c;
  }
  return std::max(f(best * h), f(0.5 * (lo + hi)));
}

double pipeline_s(const TwoQubitDensity& rho, double alpha) {
  const ChshSettingSet set = chsh_settings(alpha);
  std::array<double, 4> e{};
  for (int k = 0; k < 4; ++k)
    e[k] = channel_probabilities(prepare_state(rho, set.settings[k])).correlation();
  return s_from_correlations(e[0], e[1], e[2], e[3]);
}

namespace {

void check_fringe(const std::vector<FringeSample>& fringe) {
  if (fringe.size() < 2) throw Error(ErrorCode::InsufficientSamples, "need at least 2 samples");
  auto [lo, hi] = std::minmax_element(fringe.begin(), fringe.end(),
                                      [](const auto& a, const auto& b) { return a.phi < b.phi; });
  const double span = hi->phi - lo->phi;
  const double spacing = span / static_cast<double>(fringe.size() - 1);
  if (span + spacing < 2.0 * std::numbers::pi * (1.0 - 1e-9))
    throw Error(ErrorCode::InsufficientSamples, "samples do not span a fringe period");
}

}  // namespace

double visibility(const std::vector<FringeSample>& fringe) {
  check_fringe(fringe);
  auto [lo, hi] = std::minmax_element(fringe.begin(), fringe.end(),
                                      [](const auto& a, const auto& b) { return a.counts < b.counts; });
  const double sum = hi->counts + lo->counts;
  if (sum <= 0.0) throw Error(ErrorCode::EmptyCounts, "fringe has no counts");
  return (hi->counts - lo->counts) / sum;
}

double fitted_visibility(const std::vector<FringeSample>& fringe) {
  check_fringe(fringe);
  if (fringe.size() < 3) throw Error(ErrorCode::InsufficientSamples, "fit needs 3 samples");
  const auto n = static_cast<Eigen::Index>(fringe.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(fringe[i].phi);
    design(i, 2) = std::sin(fringe[i].phi);
    y[i] = fringe[i].counts;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);
  if (coef[0] <= 0.0) throw Error(ErrorCode::EmptyCounts, "fringe has no counts");
  return std::hypot(coef[1], coef[2]) / coef[0];
}

std::vector<FringeSample> simulate_fringe(const TwoQubitDensity& rho, double theta,
                                          const std::vector<double>& phi_grid,
                                          const SourceConfig& src, const DetectorConfig& det,
                                          const RngStream& rng) {
  std::vector<FringeSample> out;
  out.reserve(phi_grid.size());
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    const auto probs = channel_probabilities(prepare_state(rho, MeasurementSetting(phi_grid[i], theta)));
    RngStream stream = rng.substream(i);
    const ChannelCounts c = simulate_counts(probs, src, det, stream);
    out.push_back({phi_grid[i], static_cast<double>(c[k0H])});
  }
  return out;
}

namespace {

// Runs `task(i)` for i in [0, n) on up to `workers` threads.
template <typename Task>
void parallel_for(std::size_t n, unsigned workers, Task task) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SweepResult run_chsh_sweep(const SweepOptions& opts, const SourceConfig& src,
                           const DetectorConfig& det, const RngStream& rng) {
  src.validate();
  det.validate();
  if (opts.repeats < 1) throw Error(ErrorCode::ConfigError, "repeats must be >= 1");
  if (opts.photons_per_setting == 0) throw Error(ErrorCode::ConfigError, "photons_per_setting must be > 0");
  if (opts.error_model == ErrorModel::Repeats && opts.repeats < 2)
    throw Error(ErrorCode::ConfigError, "repeat-based errors need repeats >= 2");

  TwoQubitDensity rho = rho_epsilon(opts.eps, opts.residual_xi);
  if (opts.eta) rho = effective_state(rho, *opts.eta);

  DetectorConfig per_setting = det;
  const std::size_t points = opts.alpha_grid.size();
  const auto repeats = static_cast<std::size_t>(opts.repeats);
  per_setting.duration =
      static_cast<double>(opts.photons_per_setting) / static_cast<double>(repeats) / src.mean_rate;
  // counts[(point * 4 + setting) * repeats + repeat]
  std::vector<ChannelCounts> counts(points * 4 * repeats);
  std::vector<ChannelProbabilities> probs;
  probs.reserve(points * 4);
  for (std::size_t p = 0; p < points; ++p) {
    const ChshSettingSet set = chsh_settings(opts.alpha_grid[p], opts.residual_xi);
    for (int k = 0; k < 4; ++k) probs.push_back(channel_probabilities(prepare_state(rho, set.settings[k])));
  }

  parallel_for(counts.size(), opts.workers, [&](std::size_t idx) {
    const std::size_t repeat = idx % repeats;
    const std::size_t cell = idx / repeats;
    RngStream stream = rng.substream(cell / 4).substream(cell % 4).substream(repeat);
    counts[idx] = simulate_counts(probs[cell], src, per_setting, stream);
  });

  SweepResult result;
  result.points.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    SweepPoint pt{};
    pt.alpha = opts.alpha_grid[p];
    pt.theta = pt.alpha / 2.0;
    double var = 0.0;
    for (int k = 0; k < 4; ++k) {
      for (std::size_t r = 0; r < repeats; ++r) pt.counts[k] += counts[(p * 4 + k) * repeats + r];
      const CorrelationEstimate est = estimate_correlation(pt.counts[k], opts.estimator);
      pt.e[k] = est.value;
      var += est.std_error * est.std_error;
    }
    pt.s = s_from_correlations(pt.e[0], pt.e[1], pt.e[2], pt.e[3]);
    if (opts.error_model == ErrorModel::Multinomial) {
      pt.s_err = std::sqrt(var);
    } else {
      std::vector<double> per_repeat(repeats);
      for (std::size_t r = 0; r < repeats; ++r) {
        std::array<double, 4> e{};
        for (int k = 0; k < 4; ++k)
          e[k] = correlation_from_counts(counts[(p * 4 + k) * repeats + r], opts.estimator);
        per_repeat[r] = s_from_correlations(e[0], e[1], e[2], e[3]);
      }
      double mean = 0.0;
      for (double s : per_repeat) mean += s;
      mean /= static_cast<double>(repeats);
      double ss = 0.0;
      for (double s : per_repeat) ss += (s - mean) * (s - mean);
      pt.s_err = std::sqrt(ss / static_cast<double>(repeats - 1)) / std::sqrt(static_cast<double>(repeats));
    }
    result.points.push_back(pt);
  }
  return result;
}

}  // namespace spe
