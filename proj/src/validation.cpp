#include "spe/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "spe/bell.hpp"
#include "spe/emit.hpp"

#ifndef SPE_GOLDEN_DIR
#define SPE_GOLDEN_DIR "tests/golden"
#endif

namespace spe {

namespace {

constexpr double kPi = std::numbers::pi;

struct Measured {
  double deviation;
  std::string detail;
};

struct Check {
  const char* name;
  double tolerance;
  std::function<Measured(const ValidationOptions&)> run;
};

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_.engine()); }

  std::complex<double> gaussian() {
    std::normal_distribution<double> n;
    return {n(rng_.engine()), n(rng_.engine())};
  }

  Matrix2c<double> unitary2() {
    Matrix2c<double> g;
    for (int i = 0; i < 4; ++i) g(i / 2, i % 2) = gaussian();
    Eigen::HouseholderQR<Matrix2c<double>> qr(g);
    return qr.householderQ();
  }

  TwoQubitDensity density() {
    Matrix4c<double> g;
    for (int i = 0; i < 16; ++i) g(i / 4, i % 4) = gaussian();
    Matrix4c<double> rho = g * g.adjoint();
    rho /= rho.trace();
    return TwoQubitDensity::from_matrix(rho);
  }

  ChannelProbabilities probabilities() {
    std::array<double, 4> p{};
    double sum = 0.0;
    for (double& x : p) sum += (x = uniform(0.01, 1.0));
    for (double& x : p) x /= sum;
    return ChannelProbabilities(p);
  }

 private:
  RngStream rng_;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Measured unitary_invariance(const ValidationOptions&) {
  Random r(1);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto rho = r.density();
    const auto out = apply_local_unitary(LocalUnitary(r.unitary2(), r.unitary2()), rho);
    worst = std::max(worst, (out.eigenvalues() - rho.eigenvalues()).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(out.matrix().trace() - 1.0));
  }
  return {worst, "max spectrum/trace drift over 200 random (rho, U)"};
}

Measured correlation_law(const ValidationOptions&) {
  Random r(2);
  const auto bell = rho_epsilon(0.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double phi = r.uniform(-7, 7), theta = r.uniform(-7, 7);
    const double e = channel_probabilities(prepare_state(bell, MeasurementSetting(phi, theta))).correlation();
    worst = std::max(worst, std::abs(e - std::cos(phi - 2 * theta)));
  }
  return {worst, "max |E - cos(phi - 2 theta)| over 200 settings"};
}

Measured projector_equivalence(const ValidationOptions&) {
  Random r(3);
  const auto bell = rho_epsilon(0.0);
  const auto psi = generate_bell_state(0.0).amplitudes();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MeasurementSetting s(r.uniform(-7, 7), r.uniform(-7, 7));
    const auto proj = rotated_projectors(s);
    const auto p = channel_probabilities(prepare_state(bell, s));
    for (int x : {1, -1})
      for (int y : {1, -1})
        worst = std::max(worst, std::abs(psi.dot(proj.joint(x, y) * psi).real() -
                                         p[RotatedProjectors<double>::channel(x, y)]));
  }
  return {worst, "rotated projectors vs rotated state, 100 settings"};
}

Measured analytic_vs_quadrature(const ValidationOptions&) {
  const SpectralProfile p(3547.24e12, 6.5e12);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = 5.0 * i / 49 / p.sigma_omega();
    worst = std::max(worst, std::abs(interference_integral(t, p) - interference_integral_quadrature(t, p).value));
  }
  return {worst, "closed-form vs quadrature interference integral, T sigma in [0, 5]"};
}

Measured epsilon_vs_fitted(const ValidationOptions&) {
  const SpectralProfile p(3547.24e12, 6.5e12);
  double worst = 0.0;
  for (int i = 0; i < 21; ++i) {
    const double t = 4.0 * i / 20 / p.sigma_omega();
    worst = std::max(worst, std::abs(fitted_interference_amplitude(t, p) - (1.0 - epsilon_of_delay(t, p))));
  }
  return {worst, "1 - eps(T) vs fitted fringe amplitude, T sigma in [0, 4]"};
}

Measured scales_filtered(const ValidationOptions&) {
  const auto s = coherence_scales(SpectralProfile(3547.24e12, 6.5e12));
  const double dev = std::max(std::abs(s.tau_c - 154e-15) / 2e-15, std::abs(s.l_c - 46.0e-6) / 0.5e-6);
  return {dev, fmt("tau_c = %.2f fs, l_c = %.3f um (in units of the allowance)", s.tau_c * 1e15, s.l_c * 1e6)};
}

Measured scales_unfiltered(const ValidationOptions&) {
  const auto s = coherence_scales(SpectralProfile(3611.4e12, 134e12));
  return {std::abs(s.l_c - 2.23e-6), fmt("l_c = %.4f um", s.l_c * 1e6)};
}

Measured multinomial_vs_enumeration(const ValidationOptions&) {
  Random r(4);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto p = r.probabilities();
    for (int n = 0; n <= 6; ++n)
      for (const auto& o : enumerate_outcomes(n))
        worst = std::max(worst, std::abs(multinomial_outcome_probability(o, p) - brute_force_outcome_probability(o, p)));
  }
  return {worst, "multinomial law vs labeled-photon enumeration, n <= 6"};
}

Measured coherent_vs_poisson(const ValidationOptions&) {
  Random r(5);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double mu = r.uniform(0.05, 8.0);
    const auto poisson = number_weights(Poissonian{mu});
    const int n_max = poisson.rbegin()->first;
    const auto coherent = coherent_weights(std::polar(std::sqrt(mu), r.uniform(0, 2 * kPi)), n_max);
    std::map<int, double> values;
    for (int n = 0; n <= n_max; ++n) values[n] = r.uniform(-1, 1);
    worst = std::max(worst, std::abs(mixture_expectation(coherent, values) - mixture_expectation(poisson, values)));
  }
  return {worst, "sum |C_n|^2 v_n vs sum P_n v_n, 20 random tests"};
}

Measured truncation_mass(const ValidationOptions&) {
  double worst = 0.0;
  for (const PhotonNumberLaw& law : {PhotonNumberLaw{Poissonian{1e-3}}, PhotonNumberLaw{Poissonian{0.01}},
                                     PhotonNumberLaw{Poissonian{50.0}}, PhotonNumberLaw{Thermal{1e-3}},
                                     PhotonNumberLaw{Thermal{5.0}}}) {
    double mass = 0.0;
    for (const auto& [n, w] : number_weights(law)) mass += w;
    worst = std::max(worst, 1.0 - mass);
  }
  return {worst, "mass dropped by photon-number truncation"};
}

Measured pipeline_vs_theory(const ValidationOptions&) {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const double alpha = 2 * kPi * i / 20, eps = j / 4.0, eta = k / 4.0;
        const auto rho = effective_state(rho_epsilon(eps), eta);
        worst = std::max(worst, std::abs(pipeline_s(rho, alpha) - theory_s(alpha, eps, eta)));
      }
  return {worst, "density-matrix pipeline vs closed-form S, 500 points"};
}

Measured quantum_bound(const ValidationOptions&) {
  const double m = max_abs_theory_s(0.0, 1.0);
  return {std::abs(m - 2 * std::numbers::sqrt2), fmt("max |S| = %.12f", m)};
}

Measured mixed_bound(const ValidationOptions&) {
  const double m = max_abs_theory_s(1.0, 1.0);
  return {m - 2.0, fmt("max |S_mixed| = %.12f", m)};
}

Measured monte_carlo_maximum(const ValidationOptions&) {
  SweepOptions o;
  o.alpha_grid = {kPi / 4};
  o.photons_per_setting = 1000000;
  const auto r = run_chsh_sweep(o, SourceConfig{}, DetectorConfig::ideal(1.0), RngStream(20240531));
  const auto& p = r.points.front();
  return {std::abs(p.s - 2 * std::numbers::sqrt2), fmt("S = %.5f +- %.5f at 1e6 photons/setting", p.s, p.s_err)};
}

Measured loss_robustness(const ValidationOptions&) {
  const auto probs = channel_probabilities(prepare_state(rho_epsilon(0.0), MeasurementSetting(0.6, 0.1)));
  const SourceConfig src{Poissonian{0.01}, 1e5};
  DetectorConfig full = DetectorConfig::ideal(10.0), lossy = full;
  lossy.efficiency.fill(0.52);
  RngStream a = RngStream(6).substream(0), b = RngStream(6).substream(1);
  const auto e1 = estimate_correlation(simulate_counts(probs, src, full, a));
  const auto e2 = estimate_correlation(simulate_counts(probs, src, lossy, b));
  const double z = std::abs(e1.value - e2.value) / std::hypot(e1.std_error, e2.std_error);
  return {z, fmt("|E(0.52) - E(1)| = %.2f combined sigma", z)};
}

Measured dead_time_losses(const ValidationOptions&) {
  RngStream rng(7);
  DetectorConfig d;
  d.efficiency.fill(1.0);
  const auto c = simulate_counts(ChannelProbabilities({0.25, 0.25, 0.25, 0.25}), SourceConfig{Poissonian{0.01}, 2e5},
                                 d, rng);
  const double f = static_cast<double>(c.dropped_dead_time) / static_cast<double>(c.total());
  return {f, fmt("dropped fraction %.5f at 200 kHz, 22 ns", f)};
}

Measured golden_headers(const ValidationOptions& opts) {
  int bad = 0;
  std::string detail;
  for (const auto& s : csv_schemas()) {
    const auto path = opts.golden_dir / (s.name + "_v" + std::to_string(s.version) + ".header");
    std::ifstream in(path);
    std::string golden;
    if (!in || !std::getline(in, golden)) {
      ++bad;
      detail += " missing " + path.string() + ";";
      continue;
    }
    std::ostringstream emitted;
    if (s.name == "sweep")
      write_sweep_csv(emitted, SweepResult{});
    else if (s.name == "theory")
      write_theory_csv(emitted, {}, 0.0, 1.0);
    else
      write_autocorr_csv(emitted, {});
    const std::string first = emitted.str().substr(0, emitted.str().find('\n'));
    if (first != golden) {
      ++bad;
      detail += " " + s.name + " header differs;";
    }
  }
  return {static_cast<double>(bad), bad ? "mismatch:" + detail : "3 headers match golden files"};
}

Measured reproducibility(const ValidationOptions&) {
  SweepOptions o;
  o.alpha_grid = {0.2, 0.9, 1.6};
  o.photons_per_setting = 20000;
  o.repeats = 2;
  std::string text[2];
  for (int run = 0; run < 2; ++run) {
    o.workers = run == 0 ? 1 : 3;
    std::ostringstream out;
    write_sweep_csv(out, run_chsh_sweep(o, SourceConfig{}, DetectorConfig{}, RngStream(99)));
    text[run] = out.str();
  }
  return {text[0] == text[1] ? 0.0 : 1.0, "sweep CSV bytes, 1 vs 3 workers, same seed"};
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all{
      {"qstate.local_unitary_invariance", 1e-10, unitary_invariance},
      {"optics.correlation_law", 1e-12, correlation_law},
      {"optics.projector_equivalence", 1e-12, projector_equivalence},
      {"coherence.analytic_vs_quadrature", 1e-6, analytic_vs_quadrature},
      {"coherence.epsilon_vs_fitted_amplitude", 1e-3, epsilon_vs_fitted},
      {"coherence.scales_filtered", 1.0, scales_filtered},
      {"coherence.scales_unfiltered", 0.05e-6, scales_unfiltered},
      {"photostats.multinomial_vs_enumeration", 1e-12, multinomial_vs_enumeration},
      {"photostats.coherent_vs_poisson", 1e-12, coherent_vs_poisson},
      {"photostats.truncation_mass", 1e-9, truncation_mass},
      {"bell.pipeline_vs_theory", 1e-12, pipeline_vs_theory},
      {"bell.quantum_bound", 1e-9, quantum_bound},
      {"bell.mixed_bound", 1e-9, mixed_bound},
      {"bell.monte_carlo_maximum", 0.01, monte_carlo_maximum},
      {"detector.loss_robustness", 5.0, loss_robustness},
      {"detector.dead_time_losses", 0.01, dead_time_losses},
      {"cli.golden_headers", 0.0, golden_headers},
      {"cli.reproducibility", 0.0, reproducibility},
  };
  return all;
}

}  // namespace

std::filesystem::path default_golden_dir() {
  if (const char* env = std::getenv("SPE_GOLDEN_DIR"); env && *env) return env;
  return SPE_GOLDEN_DIR;
}

const std::vector<std::string>& validation_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : checks()) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  const auto& names = validation_check_names();
  for (const auto& c : opts.corrupt)
    if (std::find(names.begin(), names.end(), c) == names.end())
      throw Error(ErrorCode::ConfigError, "unknown check " + c);

  std::vector<CheckResult> out;
  for (const auto& c : checks()) {
    const bool corrupted = std::find(opts.corrupt.begin(), opts.corrupt.end(), c.name) != opts.corrupt.end();
    const double tol = corrupted ? -1.0 : c.tolerance;
    CheckResult r{c.name, 0.0, tol, false, ""};
    try {
      const Measured m = c.run(opts);
      r.deviation = m.deviation;
      r.detail = m.detail;
      r.passed = std::isfinite(m.deviation) && m.deviation <= tol;
    } catch (const std::exception& e) {
      r.deviation = NAN;
      r.detail = std::string("threw: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_validate(const ValidationOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> results;
  const auto start = std::chrono::steady_clock::now();
  try {
    results = run_validation(opts);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int failed = 0;
  char line[256];
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    std::snprintf(line, sizeof line, "%-4s %-40s dev=%-12.4g tol=%-10.3g ", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.deviation, r.tolerance);
    out << line << r.detail << '\n';
  }
  std::snprintf(line, sizeof line, "%zu checks, %d failed, %.1f s\n", results.size(), failed, seconds);
  out << line;
  return failed == 0 ? 0 : 1;
}

}  // namespace spe
