#pragma once
// Exact linear algebra on the single-photon momentum (x) polarization space.
//
// Canonical basis order is (|0V>, |0H>, |1V>, |1H>), i.e. index = 2 * path + pol
// with path in {0, 1} and pol in {V = 0, H = 1}. Every serialized vector,
// matrix or count tuple in this project uses the same order.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>

#include "spe/errors.hpp"

namespace spe {

enum Channel : int { k0V = 0, k0H = 1, k1V = 2, k1H = 3 };

template <typename Scalar>
struct NumericTolerance {
  static constexpr Scalar exact = Scalar(1e-12);
  static constexpr Scalar eigen_floor = Scalar(1e-10);
  static constexpr Scalar zero_norm = Scalar(1e-15);
};

template <>
struct NumericTolerance<float> {
  static constexpr float exact = 1e-5f;
  static constexpr float eigen_floor = 1e-4f;
  static constexpr float zero_norm = 1e-30f;
};

template <typename Scalar> using Vector4c = Eigen::Matrix<std::complex<Scalar>, 4, 1>;
template <typename Scalar> using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar> using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Normalized pure state on the 4-dim space.
template <typename Scalar>
class BasicTwoQubitState {
 public:
  using Vector = Vector4c<Scalar>;

  /// Basis vector for a canonical channel.
  static BasicTwoQubitState basis(Channel c) {
    Vector v = Vector::Zero();
    v[c] = Scalar(1);
    return BasicTwoQubitState(v);
  }

  const Vector& amplitudes() const { return amps_; }
  std::complex<Scalar> operator[](int i) const { return amps_[i]; }

  Matrix4c<Scalar> projector() const { return amps_ * amps_.adjoint(); }

 private:
  template <typename S>
  friend BasicTwoQubitState<S> validate_state(const Vector4c<S>&);

  explicit BasicTwoQubitState(const Vector& v) : amps_(v) {}
  Vector amps_;
};

/// Normalizes a raw amplitude vector; rejects the zero vector and non-finite entries.
template <typename Scalar>
BasicTwoQubitState<Scalar> validate_state(const Vector4c<Scalar>& amps) {
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(amps[i].real()) || !std::isfinite(amps[i].imag()))
      throw Error(ErrorCode::InvalidState, "non-finite amplitude");
  }
  const Scalar norm = amps.norm();
  if (norm < NumericTolerance<Scalar>::zero_norm)
    throw Error(ErrorCode::ZeroNorm, "amplitude vector has zero norm");
  return BasicTwoQubitState<Scalar>(amps / norm);
}

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
template <typename Scalar>
class BasicTwoQubitDensity {
 public:
  using Matrix = Matrix4c<Scalar>;
  using Real = Eigen::Matrix<Scalar, 4, 1>;

  /// Checks the density-matrix invariants. Eigenvalues in [-eigen_floor, 0) are
  /// clamped to zero and the trace is restored.
  static BasicTwoQubitDensity from_matrix(const Matrix& m) {
    using Tol = NumericTolerance<Scalar>;
    if (!m.allFinite()) throw Error(ErrorCode::InvalidState, "non-finite density entry");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > Tol::exact)
      throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
    const std::complex<Scalar> tr = m.trace();
    if (std::abs(tr - std::complex<Scalar>(1)) > Tol::exact)
      throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");

    Matrix herm = (m + m.adjoint()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    const Real& evals = es.eigenvalues();
    if (evals.minCoeff() < -Tol::eigen_floor)
      throw Error(ErrorCode::InvalidState, "density matrix has a negative eigenvalue");
    if (evals.minCoeff() < Scalar(0)) {
      Real clamped = evals.cwiseMax(Scalar(0));
      clamped /= clamped.sum();
      herm = es.eigenvectors() * clamped.template cast<std::complex<Scalar>>().asDiagonal() *
             es.eigenvectors().adjoint();
    }
    return BasicTwoQubitDensity(herm);
  }

  static BasicTwoQubitDensity pure(const BasicTwoQubitState<Scalar>& s) {
    return BasicTwoQubitDensity(s.projector());
  }

  static BasicTwoQubitDensity maximally_mixed() {
    return BasicTwoQubitDensity(Matrix::Identity() / Scalar(4));
  }

  const Matrix& matrix() const { return rho_; }
  std::complex<Scalar> operator()(int r, int c) const { return rho_(r, c); }

  /// Ascending eigenvalues.
  Real eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<Matrix>(rho_, Eigen::EigenvaluesOnly).eigenvalues();
  }

  Scalar purity() const { return (rho_ * rho_).trace().real(); }

 private:
  explicit BasicTwoQubitDensity(const Matrix& m) : rho_(m) {}
  Matrix rho_;
};

/// U_momentum (x) U_polarization, each block unitary.
template <typename Scalar>
class BasicLocalUnitary {
 public:
  using Block = Matrix2c<Scalar>;

  BasicLocalUnitary(const Block& momentum, const Block& polarization)
      : momentum_(momentum), polarization_(polarization) {
    check_unitary(momentum_, "momentum");
    check_unitary(polarization_, "polarization");
  }

  static BasicLocalUnitary identity() { return {Block::Identity(), Block::Identity()}; }

  const Block& momentum_block() const { return momentum_; }
  const Block& polarization_block() const { return polarization_; }

  Matrix4c<Scalar> kron() const {
    Matrix4c<Scalar> out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.template block<2, 2>(2 * i, 2 * j) = momentum_(i, j) * polarization_;
    return out;
  }

 private:
  static void check_unitary(const Block& u, const char* which) {
    if ((u.adjoint() * u - Block::Identity()).cwiseAbs().maxCoeff() > NumericTolerance<Scalar>::exact)
      throw Error(ErrorCode::InvalidState, std::string(which) + " block is not unitary");
  }

  Block momentum_;
  Block polarization_;
};

/// Born-rule probabilities of the four canonical channels.
template <typename Scalar>
class BasicChannelProbabilities {
 public:
  /// Entries must lie in [0,1] and sum to 1 within the exact tolerance;
  /// tiny negative round-off is clamped.
  explicit BasicChannelProbabilities(const std::array<Scalar, 4>& p) : p_(p) {
    using Tol = NumericTolerance<Scalar>;
    Scalar sum = 0;
    for (auto& v : p_) {
      if (!std::isfinite(v) || v < -Tol::exact || v > Scalar(1) + Tol::exact)
        throw Error(ErrorCode::InvalidState, "channel probability outside [0,1]");
      v = std::clamp(v, Scalar(0), Scalar(1));
      sum += v;
    }
    if (std::abs(sum - Scalar(1)) > Tol::exact)
      throw Error(ErrorCode::InvalidState, "channel probabilities do not sum to 1");
  }

  Scalar operator[](int c) const { return p_[c]; }
  Scalar p_0V() const { return p_[k0V]; }
  Scalar p_0H() const { return p_[k0H]; }
  Scalar p_1V() const { return p_[k1V]; }
  Scalar p_1H() const { return p_[k1H]; }
  const std::array<Scalar, 4>& values() const { return p_; }

  /// E = p_1V + p_0H - p_0V - p_1H.
  Scalar correlation() const { return p_[k1V] + p_[k0H] - p_[k0V] - p_[k1H]; }

 private:
  std::array<Scalar, 4> p_;
};

using TwoQubitState = BasicTwoQubitState<double>;
using TwoQubitDensity = BasicTwoQubitDensity<double>;
using LocalUnitary = BasicLocalUnitary<double>;
using ChannelProbabilities = BasicChannelProbabilities<double>;

template <typename Scalar>
BasicTwoQubitDensity<Scalar> apply_local_unitary(const BasicLocalUnitary<Scalar>& u,
                                                 const BasicTwoQubitDensity<Scalar>& rho) {
  const Matrix4c<Scalar> k = u.kron();
  return BasicTwoQubitDensity<Scalar>::from_matrix(k * rho.matrix() * k.adjoint());
}

template <typename Scalar>
BasicChannelProbabilities<Scalar> channel_probabilities(const BasicTwoQubitDensity<Scalar>& rho) {
  const auto d = rho.matrix().diagonal().real();
  return BasicChannelProbabilities<Scalar>({d[0], d[1], d[2], d[3]});
}

/// (1 - w) rho_a + w rho_b.
template <typename Scalar>
BasicTwoQubitDensity<Scalar> convex_mix(const BasicTwoQubitDensity<Scalar>& rho_a,
                                        const BasicTwoQubitDensity<Scalar>& rho_b, Scalar w) {
  if (!(w >= Scalar(0) && w <= Scalar(1)))
    throw Error(ErrorCode::WeightOutOfRange, "mixing weight must lie in [0,1]");
  return BasicTwoQubitDensity<Scalar>::from_matrix((Scalar(1) - w) * rho_a.matrix() +
                                                   w * rho_b.matrix());
}

/// Reduced state of the momentum qubit (trace over polarization).
template <typename Scalar>
Matrix2c<Scalar> reduce_to_momentum(const BasicTwoQubitDensity<Scalar>& rho) {
  Matrix2c<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
  return out;
}

/// Reduced state of the polarization qubit (trace over momentum).
template <typename Scalar>
Matrix2c<Scalar> reduce_to_polarization(const BasicTwoQubitDensity<Scalar>& rho) {
  Matrix2c<Scalar> out;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      out(k, l) = rho(k, l) + rho(2 + k, 2 + l);
  return out;
}

}  // namespace spe
