#include "spe/coherence.hpp"

#include <cmath>
#include <numbers>

namespace spe {

namespace {

constexpr double kPi = std::numbers::pi;
// Integration half-width in units of sigma; Gaussian tail mass beyond is < 1e-14.
constexpr double kQuadratureSpan = 8.0;

void check_unit_interval(double v, ErrorCode code, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(code, std::string(name) + " must lie in [0,1]");
}

}  // namespace

SpectralProfile::SpectralProfile(double omega0, double sigma_omega, double amplitude)
    : omega0_(omega0), sigma_omega_(sigma_omega), amplitude_(amplitude) {
  if (!(sigma_omega > 0.0) || !std::isfinite(sigma_omega))
    throw Error(ErrorCode::InvalidFilter, "sigma_omega must be positive");
  if (!std::isfinite(omega0) || !(omega0 / sigma_omega > 10.0))
    throw Error(ErrorCode::InvalidFilter, "profile must satisfy omega0 / sigma_omega > 10");
}

double SpectralProfile::center_wavelength() const { return 2.0 * kPi * kSpeedOfLight / omega0_; }

double SpectralProfile::density(double omega) const {
  const double z = (omega - omega0_) / sigma_omega_;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * kPi) * sigma_omega_);
}

SpectralProfile profile_from_filter(double center_wavelength, double bandwidth) {
  if (!(center_wavelength > 0.0) || !(bandwidth > 0.0) || !std::isfinite(center_wavelength) ||
      !std::isfinite(bandwidth))
    throw Error(ErrorCode::InvalidFilter, "wavelength and bandwidth must be positive");
  if (bandwidth >= 0.1 * center_wavelength)
    throw Error(ErrorCode::InvalidFilter, "bandwidth must be much narrower than the wavelength");
  const double omega0 = 2.0 * kPi * kSpeedOfLight / center_wavelength;
  const double sigma = 2.0 * kPi * kSpeedOfLight * bandwidth / (center_wavelength * center_wavelength);
  return SpectralProfile(omega0, sigma);
}

CoherenceScales coherence_scales(const SpectralProfile& p) {
  const double tau = 1.0 / p.sigma_omega();
  return {tau, kSpeedOfLight * tau};
}

double coherence_envelope(double delay, const SpectralProfile& p) {
  const double x = delay * p.sigma_omega();
  return std::exp(-0.5 * x * x);
}

double epsilon_of_delay(double delay, const SpectralProfile& p) {
  if (!std::isfinite(delay)) throw Error(ErrorCode::ParamOutOfRange, "delay must be finite");
  return -std::expm1(-0.5 * std::pow(delay * p.sigma_omega(), 2));
}

double epsilon_of_path_difference(double delta_l, const SpectralProfile& p) {
  if (!std::isfinite(delta_l)) throw Error(ErrorCode::ParamOutOfRange, "path difference must be finite");
  const double r = delta_l / coherence_scales(p).l_c;
  return -std::expm1(-r * r);
}

TwoQubitDensity rho_mixed() {
  Matrix4c<double> m = Matrix4c<double>::Zero();
  m(k0H, k0H) = 0.5;
  m(k1V, k1V) = 0.5;
  return TwoQubitDensity::from_matrix(m);
}

TwoQubitDensity rho_epsilon(double eps, double residual_xi) {
  check_unit_interval(eps, ErrorCode::EpsOutOfRange, "epsilon");
  const auto entangled = TwoQubitDensity::pure(generate_bell_state(residual_xi));
  return convex_mix(entangled, rho_mixed(), eps);
}

TwoQubitDensity effective_state(const TwoQubitDensity& rho, double eta) {
  check_unit_interval(eta, ErrorCode::EtaOutOfRange, "eta");
  return convex_mix(TwoQubitDensity::maximally_mixed(), rho, eta);
}

std::complex<double> interference_integral(double delay, const SpectralProfile& p) {
  return std::polar(coherence_envelope(delay, p), -p.omega0() * delay);
}

QuadratureResult<std::complex<double>> interference_integral_quadrature(double delay,
                                                                        const SpectralProfile& p,
                                                                        double abs_tol) {
  const double lo = p.omega0() - kQuadratureSpan * p.sigma_omega();
  const double hi = p.omega0() + kQuadratureSpan * p.sigma_omega();
  auto integrand = [&](double omega) {
    return std::polar(p.density(omega), -omega * delay);
  };
  auto result = integrate_adaptive<std::complex<double>>(integrand, lo, hi, abs_tol);
  if (!result.converged)
    throw Error(ErrorCode::QuadratureFailure,
                "interference integral did not reach tolerance (error " +
                    std::to_string(result.error) + ")");
  return result;
}

double precise_detection_probability(int detector, const Matrix2c<double>& q, double delay,
                                     double theta_pol, const SpectralProfile& p,
                                     IntegralRoute route) {
  if (detector != 0 && detector != 1)
    throw Error(ErrorCode::ParamOutOfRange, "detector index must be 0 or 1");
  Eigen::Vector2cd v(1.0, 0.0);
  Eigen::Vector2cd theta(std::cos(theta_pol), std::sin(theta_pol));
  const std::complex<double> vqv = v.dot(q * v);
  const std::complex<double> tqt = theta.dot(q * theta);
  const std::complex<double> vqt = v.dot(q * theta);
  const std::complex<double> integral = route == IntegralRoute::Analytic
                                            ? interference_integral(delay, p)
                                            : interference_integral_quadrature(delay, p).value;
  const double sign = detector == 0 ? 1.0 : -1.0;
  return 0.25 * (vqv.real() + tqt.real() + sign * 2.0 * (vqt * integral).real());
}

double fitted_interference_amplitude(double delay, const SpectralProfile& p, IntegralRoute route,
                                     int samples) {
  if (samples < 5) throw Error(ErrorCode::InsufficientSamples, "need at least 5 fringe samples");
  const double period = 2.0 * kPi / p.omega0();
  const Matrix2c<double> identity = Matrix2c<double>::Identity();
  Eigen::MatrixXd design(samples, 5);
  Eigen::VectorXd prob(samples);
  for (int k = 0; k < samples; ++k) {
    const double u = static_cast<double>(k) / samples - 0.5;  // offset in periods
    const double t = delay + u * period;
    const double c = std::cos(p.omega0() * t), s = std::sin(p.omega0() * t);
    // The envelope drifts across the window; a linear term per quadrature
    // keeps that slope out of the amplitude at the center.
    design.row(k) << 1.0, c, s, u * c, u * s;
    prob[k] = precise_detection_probability(0, identity, t, 0.0, p, route);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(prob);
  // P0 = 1/2 (1 + A cos(w0 t + c)).
  return 2.0 * std::hypot(coef[1], coef[2]);
}

std::vector<AutocorrelationPoint> autocorrelation_curve(const SpectralProfile& p,
                                                        const std::vector<double>& delta_l_grid) {
  const Matrix2c<double> identity = Matrix2c<double>::Identity();
  std::vector<AutocorrelationPoint> out;
  out.reserve(delta_l_grid.size());
  for (double dl : delta_l_grid) {
    if (!std::isfinite(dl)) throw Error(ErrorCode::ParamOutOfRange, "grid point must be finite");
    out.push_back({dl, precise_detection_probability(0, identity, dl / kSpeedOfLight, 0.0, p)});
  }
  return out;
}

}  // namespace spe
