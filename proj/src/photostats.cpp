#include "spe/photostats.hpp"

#include <cmath>
#include <type_traits>

namespace spe {

namespace {

constexpr double kHbar = 1.054571817e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;   // J / K
constexpr double kTruncationMass = 1.0 - 1e-9;
constexpr int kBruteForceLimit = 8;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void SourceConfig::validate() const {
  std::visit(overloaded{
                 [](const Poissonian& p) {
                   if (!(p.mu > 0.0)) throw Error(ErrorCode::ConfigError, "mu must be positive");
                 },
                 [](const Thermal& t) {
                   if (!(t.mean_occupancy > 0.0))
                     throw Error(ErrorCode::ConfigError, "mean occupancy must be positive");
                 },
                 [](const FixedFock& f) {
                   if (f.n < 0) throw Error(ErrorCode::ConfigError, "Fock number must be >= 0");
                 },
             },
             law);
  if (!(mean_rate > 0.0) || !std::isfinite(mean_rate))
    throw Error(ErrorCode::ConfigError, "mean_rate must be positive");
}

double photon_number_pmf(const PhotonNumberLaw& law, int n) {
  if (n < 0) return 0.0;
  return std::visit(
      overloaded{
          [n](const Poissonian& p) {
            return std::exp(-p.mu + n * std::log(p.mu) - std::lgamma(n + 1.0));
          },
          [n](const Thermal& t) {
            const double nb = t.mean_occupancy;
            return std::exp(n * std::log(nb / (nb + 1.0))) / (1.0 + nb);
          },
          [n](const FixedFock& f) { return n == f.n ? 1.0 : 0.0; },
      },
      law);
}

int truncation_limit(const PhotonNumberLaw& law) {
  if (const auto* f = std::get_if<FixedFock>(&law)) return f->n;
  int n = 0;
  if (const auto* p = std::get_if<Poissonian>(&law))
    n = static_cast<int>(std::ceil(p->mu + 10.0 * std::sqrt(p->mu)));
  double mass = 0.0;
  for (int k = 0; k <= n; ++k) mass += photon_number_pmf(law, k);
  while (mass < kTruncationMass) mass += photon_number_pmf(law, ++n);
  return n;
}

std::map<int, double> number_weights(const PhotonNumberLaw& law) {
  std::map<int, double> w;
  const int limit = truncation_limit(law);
  for (int n = 0; n <= limit; ++n) {
    const double p = photon_number_pmf(law, n);
    if (p > 0.0) w[n] = p;
  }
  return w;
}

std::map<int, double> coherent_weights(std::complex<double> alpha, int n_max) {
  std::map<int, double> w;
  const double mu = std::norm(alpha);
  std::complex<double> c = std::exp(-0.5 * mu);  // C_0
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    w[n] = std::norm(c);
  }
  return w;
}

double thermal_occupancy(double omega, double temperature) {
  if (!(omega > 0.0) || !(temperature > 0.0))
    throw Error(ErrorCode::ParamOutOfRange, "frequency and temperature must be positive");
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

std::vector<double> sample_arrivals(const SourceConfig& src, double duration, RngStream& rng) {
  src.validate();
  std::vector<double> times;
  if (!(duration > 0.0)) return times;
  times.reserve(static_cast<std::size_t>(src.mean_rate * duration * 1.01 + 16));
  std::exponential_distribution<double> gap(src.mean_rate);
  for (double t = gap(rng.engine()); t < duration; t += gap(rng.engine())) times.push_back(t);
  return times;
}

std::vector<OutcomeString> enumerate_outcomes(int n) {
  std::vector<OutcomeString> out;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; a + b <= n; ++b)
      for (int c = 0; a + b + c <= n; ++c) out.push_back({{a, b, c, n - a - b - c}});
  return out;
}

double multinomial_outcome_probability(const OutcomeString& o, const ChannelProbabilities& p) {
  double log_prob = std::lgamma(o.total() + 1.0);
  for (int h = 0; h < 4; ++h) {
    const int k = o.counts[h];
    if (k < 0) throw Error(ErrorCode::ParamOutOfRange, "negative photon count");
    if (k == 0) continue;
    if (p[h] == 0.0) return 0.0;
    log_prob += k * std::log(p[h]) - std::lgamma(k + 1.0);
  }
  return std::exp(log_prob);
}

double brute_force_outcome_probability(const OutcomeString& o, const ChannelProbabilities& p) {
  const int n = o.total();
  if (n > kBruteForceLimit) throw Error(ErrorCode::TooLarge, "enumeration limited to n <= 8");
  std::uint64_t assignments = 1;
  for (int i = 0; i < n; ++i) assignments *= 4;
  double total = 0.0;
  for (std::uint64_t code = 0; code < assignments; ++code) {
    std::array<int, 4> tally{};
    double prob = 1.0;
    std::uint64_t rest = code;
    for (int photon = 0; photon < n; ++photon) {
      const int h = static_cast<int>(rest % 4);
      rest /= 4;
      ++tally[h];
      prob *= p[h];
    }
    if (tally == o.counts) total += prob;
  }
  return total;
}

OutcomeString sample_outcome(int n, const ChannelProbabilities& p, RngStream& rng) {
  OutcomeString o;
  const double c0 = p[0], c1 = c0 + p[1], c2 = c1 + p[2];
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const int h = u < c0 ? 0 : u < c1 ? 1 : u < c2 ? 2 : 3;
    ++o.counts[h];
  }
  return o;
}

double mixture_expectation(const std::map<int, double>& weights,
                           const std::map<int, double>& per_n_values) {
  double mass = 0.0, sum = 0.0;
  for (const auto& [n, w] : weights) {
    if (w < 0.0) throw Error(ErrorCode::UnnormalizedWeights, "negative weight");
    mass += w;
    if (w == 0.0) continue;
    auto it = per_n_values.find(n);
    if (it == per_n_values.end())
      throw Error(ErrorCode::ParamOutOfRange, "no value for photon number " + std::to_string(n));
    sum += w * it->second;
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw Error(ErrorCode::UnnormalizedWeights, "weights sum to " + std::to_string(mass));
  return sum;
}

}  // namespace spe
