#pragma once
// Temporal coherence of broadband sources: Gaussian spectral profiles, the
// decoherence weight epsilon(T), the phenomenological states rho_epsilon and
// rho_eff, and the precise one-photon interference probability.

#include <complex>
#include <vector>

#include "spe/optics.hpp"
#include "spe/quadrature.hpp"
#include "spe/qstate.hpp"

namespace spe {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Gaussian spectrum f(w) ~ exp(-(w - w0)^2 / (2 sigma^2)).
/// Angular frequencies in rad/s. `amplitude` is fit metadata only.
class SpectralProfile {
 public:
  SpectralProfile(double omega0, double sigma_omega, double amplitude = 1.0);

  double omega0() const { return omega0_; }
  double sigma_omega() const { return sigma_omega_; }
  double amplitude() const { return amplitude_; }
  double center_wavelength() const;

  /// Normalized density f(w).
  double density(double omega) const;

 private:
  double omega0_;
  double sigma_omega_;
  double amplitude_;
};

/// Interprets `bandwidth` as the Gaussian sigma in wavelength:
/// sigma_w = 2 pi c dlambda / lambda^2.
SpectralProfile profile_from_filter(double center_wavelength, double bandwidth);

struct CoherenceScales {
  double tau_c;  // s
  double l_c;    // m
};

CoherenceScales coherence_scales(const SpectralProfile& p);

/// epsilon = 1 - exp(-T^2 sigma^2 / 2).
double epsilon_of_delay(double delay, const SpectralProfile& p);

/// Length form epsilon = 1 - exp(-dL^2 / l_c^2). Note this is not
/// epsilon_of_delay(dL / c): the time form has a factor 1/2 in the exponent.
/// Both are kept as stated; a config picks one by giving delta_l or delay.
double epsilon_of_path_difference(double delta_l, const SpectralProfile& p);

/// Envelope g(T) = exp(-sigma^2 T^2 / 2).
double coherence_envelope(double delay, const SpectralProfile& p);

/// 1/2 |0H><0H| + 1/2 |1V><1V|.
TwoQubitDensity rho_mixed();

/// (1 - eps) |psi(xi)><psi(xi)| + eps rho_mixed, with psi from generate_bell_state(xi).
TwoQubitDensity rho_epsilon(double eps, double residual_xi = 0.0);

/// eta rho + (1 - eta) I/4.
TwoQubitDensity effective_state(const TwoQubitDensity& rho, double eta);

/// Integral of f(w) exp(-i w T) over the real line, closed form.
std::complex<double> interference_integral(double delay, const SpectralProfile& p);

/// Same integral by adaptive quadrature over [w0 - 8 sigma, w0 + 8 sigma].
/// Throws QuadratureFailure if the error estimate exceeds `abs_tol`.
QuadratureResult<std::complex<double>> interference_integral_quadrature(
    double delay, const SpectralProfile& p, double abs_tol = 1e-9);

enum class IntegralRoute { Analytic, Quadrature };

/// Probability to find the photon in output port `detector` (0 or 1) with its
/// polarization selected by the projector `q`, for delay T between the arms and
/// polarization |theta> = cos|V> + sin|H> in arm 0.
double precise_detection_probability(int detector, const Matrix2c<double>& q, double delay,
                                     double theta_pol, const SpectralProfile& p,
                                     IntegralRoute route = IntegralRoute::Analytic);

/// Interference amplitude at delay T from a least-squares fit of detector-0
/// probabilities sampled over one fringe period centered on T.
double fitted_interference_amplitude(double delay, const SpectralProfile& p,
                                     IntegralRoute route = IntegralRoute::Quadrature,
                                     int samples = 16);

struct AutocorrelationPoint {
  double delta_l;      // m
  double probability;  // detector 0, normalized
};

/// 1/2 (1 + cos(w0 T) g(T)) with T = dL / c.
std::vector<AutocorrelationPoint> autocorrelation_curve(const SpectralProfile& p,
                                                        const std::vector<double>& delta_l_grid);

}  // namespace spe
