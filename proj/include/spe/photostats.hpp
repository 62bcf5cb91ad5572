#pragma once
// Photon-number laws of the sources, the arrival-time process, and the
// multi-photon outcome calculus (multinomial law plus its enumeration oracle).

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "spe/qstate.hpp"
#include "spe/rng.hpp"

namespace spe {

/// Attenuated laser after phase diffusion: P_n = e^-mu mu^n / n!.
struct Poissonian {
  double mu;
};

/// Mode-filtered thermal light: P_n = nbar^n / (1 + nbar)^(n+1).
struct Thermal {
  double mean_occupancy;
};

struct FixedFock {
  int n;
};

using PhotonNumberLaw = std::variant<Poissonian, Thermal, FixedFock>;

struct SourceConfig {
  PhotonNumberLaw law = Poissonian{0.01};
  double mean_rate = 1e5;  // photons per second

  void validate() const;
};

double photon_number_pmf(const PhotonNumberLaw& law, int n);
inline double photon_number_pmf(const SourceConfig& src, int n) {
  return photon_number_pmf(src.law, n);
}

/// Largest n kept when truncating sums over the photon number.
/// Poissonian: mu + 10 sqrt(mu), extended if needed so the kept mass is
/// > 1 - 1e-9. Thermal: first n with cumulative mass >= 1 - 1e-9.
int truncation_limit(const PhotonNumberLaw& law);

/// Truncated P_n as a map n -> P_n.
std::map<int, double> number_weights(const PhotonNumberLaw& law);

/// |C_n|^2 for the coherent state with amplitude alpha, built from the complex
/// amplitudes C_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!).
std::map<int, double> coherent_weights(std::complex<double> alpha, int n_max);

/// Bose-Einstein occupancy 1 / (exp(hbar w / kB T) - 1).
double thermal_occupancy(double omega, double temperature);

/// Homogeneous Poisson process on [0, duration) at src.mean_rate.
std::vector<double> sample_arrivals(const SourceConfig& src, double duration, RngStream& rng);

/// Photons per channel (n_0V, n_0H, n_1V, n_1H).
struct OutcomeString {
  std::array<int, 4> counts{};

  int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  auto operator<=>(const OutcomeString&) const = default;
};

/// All outcome strings with n photons in total.
std::vector<OutcomeString> enumerate_outcomes(int n);

/// n! / (n1! n2! n3! n4!) prod p_h^{n_h}, via log-gamma.
double multinomial_outcome_probability(const OutcomeString& o, const ChannelProbabilities& p);

/// Sums the product probabilities of every assignment of n labeled photons to
/// channels that realizes `o`. Exponential in n; throws TooLarge for n > 8.
double brute_force_outcome_probability(const OutcomeString& o, const ChannelProbabilities& p);

/// Draws each of n photons independently from p and tallies the channels.
OutcomeString sample_outcome(int n, const ChannelProbabilities& p, RngStream& rng);

/// Sum_n w_n v_n. Weights must sum to 1 within 1e-9; every weighted n needs a value.
double mixture_expectation(const std::map<int, double>& weights,
                           const std::map<int, double>& per_n_values);

}  // namespace spe
