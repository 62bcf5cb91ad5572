#pragma once
// Random generators and statistics helpers shared by the test binaries.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "spe/qstate.hpp"

namespace spe::testing {

inline std::mt19937_64& test_rng() {
  static std::mt19937_64 rng(20240531);
  return rng;
}

inline std::complex<double> gaussian_complex() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(test_rng()), n(test_rng())};
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(test_rng());
}

/// Haar-ish random 2x2 unitary from the QR factor of a Ginibre matrix.
inline Matrix2c<double> random_unitary2() {
  Matrix2c<double> g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = gaussian_complex();
  Eigen::HouseholderQR<Matrix2c<double>> qr(g);
  return qr.householderQ();
}

/// Random full-rank density matrix G G^dagger / tr.
inline TwoQubitDensity random_density() {
  Matrix4c<double> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = gaussian_complex();
  Matrix4c<double> rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return TwoQubitDensity::from_matrix(rho);
}

inline ChannelProbabilities random_probabilities() {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (auto& v : p) sum += (v = uniform(0.0, 1.0));
  for (auto& v : p) v /= sum;
  return ChannelProbabilities(p);
}

/// Wilson-Hilferty approximation to the upper chi-square quantile for the
/// standard-normal deviate z (z = 3.090 for a 0.001 rejection threshold).
inline double chi_square_critical(int dof, double z = 3.090) {
  const double k = dof;
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

}  // namespace spe::testing
