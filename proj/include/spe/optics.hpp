#pragma once
// Optical bench: element unitaries, the generation stage and the
// preparation-stage rotation U_a (x) U_b with its rotated projectors.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "spe/qstate.hpp"

namespace spe {

/// Reduces an angle to [0, 2 pi).
template <typename Scalar>
Scalar reduce_angle(Scalar a) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  if (!std::isfinite(a)) throw Error(ErrorCode::ParamOutOfRange, "angle must be finite");
  Scalar r = std::fmod(a, two_pi);
  if (r < Scalar(0)) r += two_pi;
  if (r >= two_pi) r = Scalar(0);
  return r;
}

/// Momentum Bloch angle phi, polarization rotation theta (Bloch angle 2 theta)
/// and the residual generation-stage phase xi (0 means PZT-compensated).
template <typename Scalar>
class BasicMeasurementSetting {
 public:
  BasicMeasurementSetting(Scalar phi, Scalar theta, Scalar xi = Scalar(0))
      : phi_(reduce_angle(phi)), theta_(reduce_angle(theta)), xi_(reduce_angle(xi)) {}

  /// Builds a setting from the two Bloch angles (phi, 2 theta).
  static BasicMeasurementSetting from_bloch(Scalar phi, Scalar two_theta) {
    return BasicMeasurementSetting(phi, two_theta / Scalar(2));
  }

  Scalar phi() const { return phi_; }
  Scalar theta() const { return theta_; }
  Scalar xi() const { return xi_; }

 private:
  Scalar phi_;
  Scalar theta_;
  Scalar xi_;
};

using MeasurementSetting = BasicMeasurementSetting<double>;

/// Half-wave plate with its fast axis at `fast_axis_angle` from vertical.
struct HwpConfig {
  double fast_axis_angle = 0.0;

  double polarization_rotation() const { return 2.0 * fast_axis_angle; }
};

/// U(theta)|V> = cos|V> + sin|H>,  U(theta)|H> = cos|H> - sin|V>   (basis V, H).
template <typename Scalar>
Matrix2c<Scalar> polarization_rotation_unitary(Scalar theta) {
  const Scalar c = std::cos(theta), s = std::sin(theta);
  Matrix2c<Scalar> u;
  u << c, -s,
       s, c;
  return u;
}

/// Half-angle rotation U(phi/2) induced by the Mach-Zehnder phase phi:
/// U|0> = cos|0> - sin|1>,  U|1> = cos|1> + sin|0>.
template <typename Scalar>
Matrix2c<Scalar> momentum_rotation_unitary(Scalar phi) {
  const Scalar half = phi / Scalar(2);
  const Scalar c = std::cos(half), s = std::sin(half);
  Matrix2c<Scalar> u;
  u << c, s,
       -s, c;
  return u;
}

template <typename Scalar>
Matrix2c<Scalar> hwp_unitary(const HwpConfig& hwp) {
  return polarization_rotation_unitary(static_cast<Scalar>(hwp.polarization_rotation()));
}

/// Raw phase offset that the phase shifter dials in so that the beam-splitter
/// factor i e^{i xi} becomes 1.
template <typename Scalar>
inline constexpr Scalar kCompensatedPhase = -std::numbers::pi_v<Scalar> / Scalar(2);

/// State leaving the generation stage for a raw beam-splitter phase xi:
/// (|1V> + i e^{i xi} |0H>) / sqrt 2.
template <typename Scalar>
BasicTwoQubitState<Scalar> generation_stage_state(Scalar raw_xi) {
  const std::complex<Scalar> i(0, 1);
  Vector4c<Scalar> v = Vector4c<Scalar>::Zero();
  v[k1V] = Scalar(1);
  v[k0H] = i * std::exp(i * raw_xi);
  return validate_state<Scalar>(v);
}

/// Generation-stage output with a residual phase on top of the compensated
/// setting; residual 0 gives |Psi+> = (|0H> + |1V>) / sqrt 2.
template <typename Scalar>
BasicTwoQubitState<Scalar> generate_bell_state(Scalar residual_xi = Scalar(0)) {
  return generation_stage_state<Scalar>(residual_xi + kCompensatedPhase<Scalar>);
}

template <typename Scalar>
BasicLocalUnitary<Scalar> preparation_unitary(const BasicMeasurementSetting<Scalar>& setting) {
  return {momentum_rotation_unitary(setting.phi()),
          polarization_rotation_unitary(setting.theta())};
}

/// (U(phi/2) (x) U(theta)) rho (.)^dagger.
template <typename Scalar>
BasicTwoQubitDensity<Scalar> prepare_state(const BasicTwoQubitDensity<Scalar>& rho_in,
                                           const BasicMeasurementSetting<Scalar>& setting) {
  return apply_local_unitary(preparation_unitary(setting), rho_in);
}

/// Projectors of a_sigma and b_sigma rotated back onto the input state.
/// Index 0 is outcome +1, index 1 is outcome -1. Momentum: +1 <-> path 0.
/// Polarization: +1 <-> H, -1 <-> V.
template <typename Scalar>
struct RotatedProjectors {
  std::array<Matrix2c<Scalar>, 2> momentum;
  std::array<Matrix2c<Scalar>, 2> polarization;

  static constexpr int index(int outcome) { return outcome > 0 ? 0 : 1; }

  /// P^a_x (x) P^b_y on the 4-dim space.
  Matrix4c<Scalar> joint(int x, int y) const {
    const Matrix2c<Scalar>& pa = momentum[index(x)];
    const Matrix2c<Scalar>& pb = polarization[index(y)];
    Matrix4c<Scalar> out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
    return out;
  }

  /// Canonical channel measured by the unrotated projector pair (x, y).
  static constexpr Channel channel(int x, int y) {
    const int path = x > 0 ? 0 : 1;
    const int pol = y > 0 ? 1 : 0;
    return static_cast<Channel>(2 * path + pol);
  }
};

template <typename Scalar>
RotatedProjectors<Scalar> rotated_projectors(const BasicMeasurementSetting<Scalar>& setting) {
  const Matrix2c<Scalar> ua = momentum_rotation_unitary(setting.phi());
  const Matrix2c<Scalar> ub = polarization_rotation_unitary(setting.theta());
  Matrix2c<Scalar> p0 = Matrix2c<Scalar>::Zero(), p1 = Matrix2c<Scalar>::Zero();
  p0(0, 0) = Scalar(1);
  p1(1, 1) = Scalar(1);
  // Momentum: P^M_{+1} = |0><0|, P^M_{-1} = |1><1|.
  // Polarization: P^P_{+1} = |H><H| (index 1), P^P_{-1} = |V><V| (index 0).
  RotatedProjectors<Scalar> out;
  out.momentum[0] = ua.adjoint() * p0 * ua;
  out.momentum[1] = ua.adjoint() * p1 * ua;
  out.polarization[0] = ub.adjoint() * p1 * ub;
  out.polarization[1] = ub.adjoint() * p0 * ub;
  return out;
}

}  // namespace spe
