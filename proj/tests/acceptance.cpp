// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
// Tolerances are pinned here; every run uses the fixed master seed below.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "spe/bell.hpp"

using namespace spe;

namespace {

constexpr std::uint64_t kMasterSeed = 20240531;
constexpr double kPi = std::numbers::pi;
const double kTsirelson = 2 * std::numbers::sqrt2;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RngStream stream(int criterion) { return RngStream(kMasterSeed).substream(criterion); }

std::vector<double> linspace(double a, double b, int n, bool endpoint = true) {
  std::vector<double> g(n);
  const int div = endpoint ? n - 1 : n;
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / div;
  return g;
}

// theta sweep with alpha = 2 theta; 21 points put theta = pi/8 on the grid.
SweepResult theta_sweep(double eta, Estimator est, const RngStream& rng) {
  SweepOptions o;
  for (double theta : linspace(0, kPi / 2, 21)) o.alpha_grid.push_back(2 * theta);
  o.eta = eta;
  o.photons_per_setting = 100000;
  o.estimator = est;
  return run_chsh_sweep(o, SourceConfig{}, DetectorConfig::ideal(1.0), rng);
}

// Max |S - eta (3 cos 2theta - cos 6theta)| / sigma, and the best violation
// significance (S - 2) / sigma for theta in [pi/16, 3pi/16].
Verdict curve_check(const char* label, double eta, Estimator est, const RngStream& rng) {
  const SweepResult r = theta_sweep(eta, est, rng);
  double worst_z = 0.0, best_violation = -1e9, s_at_peak = 0.0;
  for (const auto& p : r.points) {
    const double expect = eta * (3 * std::cos(2 * p.theta) - std::cos(6 * p.theta));
    worst_z = std::max(worst_z, std::abs(p.s - expect) / p.s_err);
    if (p.theta >= kPi / 16 - 1e-12 && p.theta <= 3 * kPi / 16 + 1e-12)
      best_violation = std::max(best_violation, (p.s - 2.0) / p.s_err);
    if (std::abs(p.theta - kPi / 8) < 1e-12) s_at_peak = p.s;
  }
  const bool pass = worst_z <= 3.0 && best_violation > 3.0;
  return {pass, fmt("%s eta=%.2f: max residual %.2f sigma (<= 3), S(pi/8) = %.4f (theory %.4f), "
                    "violation %.1f sigma",
                    label, eta, worst_z, s_at_peak, eta * kTsirelson, best_violation)};
}

Verdict criterion1() {
  SweepOptions o;
  o.alpha_grid = {kPi / 4};
  o.photons_per_setting = 1000000;
  const auto p = run_chsh_sweep(o, SourceConfig{}, DetectorConfig::ideal(1.0), stream(1)).points.front();
  const double dev = std::abs(p.s - kTsirelson);
  return {dev <= 0.01 && p.s_err * 3 <= 0.01,
          fmt("S = %.5f +- %.5f, |S - 2sqrt2| = %.5f (<= 0.01)", p.s, p.s_err, dev)};
}

Verdict criterion2() { return curve_check("laser", 0.95, Estimator::FourChannel, stream(2)); }

Verdict criterion3() {
  const Verdict led = curve_check("LED", 0.87, Estimator::TwoChannel, stream(3).substream(0));
  const Verdict hal = curve_check("halogen", 0.91, Estimator::TwoChannel, stream(3).substream(1));
  return {led.pass && hal.pass, led.detail + "; " + hal.detail};
}

Verdict criterion4() {
  SweepOptions o;
  o.alpha_grid = linspace(0, 2 * kPi, 100, false);
  o.eps = 1.0;
  o.eta = 0.89;
  o.photons_per_setting = 100000;
  const RngStream rng = stream(4);
  const auto r = run_chsh_sweep(o, SourceConfig{}, DetectorConfig::ideal(1.0), rng.substream(0));
  double worst = -1e9, max_abs_s = 0.0;
  for (const auto& p : r.points) {
    worst = std::max(worst, (std::abs(p.s) - 2.0) / p.s_err);
    max_abs_s = std::max(max_abs_s, std::abs(p.s));
  }
  const double analytic = max_abs_theory_s(1.0, 1.0);

  // Fringes of the mixed state alone (eps = 1, eta = 1): eta < 1 would cap V(theta = 0) at eta.
  const auto phi = linspace(0, 2 * kPi, 24, false);
  const auto mixed = rho_epsilon(1.0);
  const auto v_quarter = visibility(simulate_fringe(mixed, kPi / 4, phi, SourceConfig{}, DetectorConfig::ideal(1.0),
                                                    rng.substream(1)));
  const auto v_zero = visibility(simulate_fringe(mixed, 0.0, phi, SourceConfig{}, DetectorConfig::ideal(1.0),
                                                 rng.substream(2)));
  const bool pass = worst <= 3.0 && analytic <= 2.0 + 1e-12 && v_quarter < 0.05 && v_zero > 0.95;
  return {pass, fmt("100 alphas: max|S| = %.4f, max (|S|-2)/sigma = %.1f (<= 3); analytic max|S_mixed| = %.12f "
                    "(<= 2); V(pi/4) = %.4f (< 0.05), V(0) = %.4f (> 0.95)",
                    max_abs_s, worst, analytic, v_quarter, v_zero)};
}

Verdict criterion5() {
  const auto f = coherence_scales(SpectralProfile(3547.24e12, 6.5e12));
  const auto u = coherence_scales(SpectralProfile(3611.4e12, 134e12));
  const bool pass = std::abs(f.tau_c - 154e-15) <= 2e-15 && std::abs(f.l_c - 46.0e-6) <= 0.5e-6 &&
                    std::abs(u.l_c - 2.23e-6) <= 0.05e-6;
  return {pass, fmt("6.5 THz: tau_c = %.2f fs (154 +- 2), l_c = %.3f um (46.0 +- 0.5); 134 THz: l_c = %.4f um "
                    "(2.23 +- 0.05)",
                    f.tau_c * 1e15, f.l_c * 1e6, u.l_c * 1e6)};
}

Verdict criterion6() {
  const auto phi = linspace(0, 2 * kPi, 24, false);
  const auto bell = rho_epsilon(0.0);
  double worst = 0.0;
  std::string values;
  int i = 0;
  for (double theta : {0.0, kPi / 8, kPi / 4}) {
    const double v = fitted_visibility(
        simulate_fringe(bell, theta, phi, SourceConfig{}, DetectorConfig::ideal(1.0), stream(6).substream(i++)));
    worst = std::max(worst, std::abs(v - 1.0));
    values += fmt(" %.4f", v);
  }
  return {worst <= 0.02, "fitted V at theta = 0, pi/8, pi/4:" + values + fmt(" (max |V-1| = %.4f <= 0.02)", worst)};
}

Verdict criterion7() {
  std::mt19937_64 gen(kMasterSeed + 7);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  double multinomial = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::array<double, 4> p{};
    double sum = 0.0;
    for (double& x : p) sum += (x = u(gen));
    for (double& x : p) x /= sum;
    const ChannelProbabilities probs(p);
    for (int n = 0; n <= 6; ++n)
      for (const auto& o : enumerate_outcomes(n))
        multinomial = std::max(multinomial, std::abs(multinomial_outcome_probability(o, probs) -
                                                     brute_force_outcome_probability(o, probs)));
  }

  const SpectralProfile prof(3547.24e12, 6.5e12);
  double eps_dev = 0.0;
  for (double ts : linspace(0, 4, 41)) {
    const double t = ts / prof.sigma_omega();
    eps_dev = std::max(eps_dev, std::abs(fitted_interference_amplitude(t, prof, IntegralRoute::Quadrature) -
                                         (1.0 - epsilon_of_delay(t, prof))));
  }

  double pipeline = 0.0;
  for (double alpha : linspace(0, 2 * kPi, 20, false))
    for (double eps : linspace(0, 1, 5))
      for (double eta : linspace(0, 1, 5))
        pipeline = std::max(pipeline, std::abs(pipeline_s(effective_state(rho_epsilon(eps), eta), alpha) -
                                               theory_s(alpha, eps, eta)));

  const bool pass = multinomial <= 1e-12 && eps_dev <= 1e-3 && pipeline <= 1e-12;
  return {pass, fmt("multinomial vs enumeration %.2e (<= 1e-12); 1-eps vs quadrature amplitude %.2e (<= 1e-3); "
                    "theory_s vs pipeline on 500 points %.2e (<= 1e-12)",
                    multinomial, eps_dev, pipeline)};
}

Verdict criterion8() {
  std::mt19937_64 gen(kMasterSeed + 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double mu = 0.05 + 7.95 * u(gen);
    const auto poisson = number_weights(Poissonian{mu});
    const int n_max = poisson.rbegin()->first;
    const auto coherent = coherent_weights(std::polar(std::sqrt(mu), 2 * kPi * u(gen)), n_max);
    // A random number-commuting observable: any function of n.
    std::map<int, double> values;
    for (int n = 0; n <= n_max; ++n) values[n] = 2 * u(gen) - 1;
    worst = std::max(worst, std::abs(mixture_expectation(coherent, values) - mixture_expectation(poisson, values)));
  }
  return {worst <= 1e-12, fmt("max difference over 20 random tests %.2e (<= 1e-12)", worst)};
}

Verdict criterion9() {
  const auto probs = channel_probabilities(prepare_state(rho_epsilon(0.0), MeasurementSetting(0.6, 0.1)));
  const SourceConfig src{Poissonian{0.01}, 1e5};
  DetectorConfig full = DetectorConfig::ideal(10.0), lossy = full;  // 1e6 photons
  lossy.efficiency.fill(0.52);
  RngStream a = stream(9).substream(0), b = stream(9).substream(1);
  const auto e1 = estimate_correlation(simulate_counts(probs, src, full, a));
  const auto e2 = estimate_correlation(simulate_counts(probs, src, lossy, b));
  const double z = std::abs(e1.value - e2.value) / std::hypot(e1.std_error, e2.std_error);
  return {z < 5.0, fmt("E(1) = %.5f, E(0.52) = %.5f, difference %.2f combined sigma (< 5); exact %.5f", e1.value,
                       e2.value, z, probs.correlation())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"quantum maximum", criterion1},
      {"laser S(theta) curve", criterion2},
      {"LED and halogen S(theta) curves", criterion3},
      {"incoherent regime", criterion4},
      {"coherence scales", criterion5},
      {"visibility constancy", criterion6},
      {"oracle equivalences", criterion7},
      {"coherent vs Poisson weights", criterion8},
      {"loss robustness", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
