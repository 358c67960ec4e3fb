#pragma once

// Spin-S linear algebra in the S_z eigenbasis. Basis index k corresponds to
// the magnetic quantum number m = S - k, so index 0 is m = +S and the last
// index is m = -S. The gyromagnetic ratio is fixed to 1, so the field to be
// estimated is the Larmor frequency omega.

#include <complex>

#include <Eigen/Core>

namespace spinsense {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealDiagonal = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

/// Spin quantum number S, stored as the integer 2S so half-integers are exact.
class SpinQuantumNumber {
 public:
  /// Throws std::invalid_argument unless two_s >= 1.
  explicit SpinQuantumNumber(int two_s);

  /// Accepts 0.5, 1, 1.5, ...; throws std::invalid_argument for anything
  /// that is not a positive half-integer.
  static SpinQuantumNumber from_value(double s);

  int two_s() const noexcept { return two_s_; }
  double value() const noexcept { return 0.5 * two_s_; }
  int dimension() const noexcept { return two_s_ + 1; }

  /// Magnetic quantum number of basis index k.
  double m(int index) const noexcept { return value() - index; }

  friend bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  int two_s_;
};

/// Normalized state vector over the 2S+1 S_z eigenstates.
class PureState {
 public:
  /// Throws std::invalid_argument if the length is not 2S+1 for some S >= 1/2
  /// or if the norm differs from one by more than 1e-12.
  explicit PureState(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  SpinQuantumNumber spin() const { return SpinQuantumNumber(static_cast<int>(amplitudes_.size()) - 1); }
  int dimension() const noexcept { return static_cast<int>(amplitudes_.size()); }
  Complex operator[](int index) const { return amplitudes_[index]; }

 private:
  ComplexVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix in the same basis.
class DensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  /// Validates every invariant; throws std::invalid_argument on violation.
  static DensityMatrix from_matrix(ComplexMatrix entries);

  const ComplexMatrix& entries() const noexcept { return entries_; }
  int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  explicit DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {}
  friend DensityMatrix dephase(const PureState&, double, double, double);

  ComplexMatrix entries_;
};

/// Spin-1 pure state
///   cos(theta)|1> + e^{i lambda1} sin(theta) cos(phi)|0> + e^{i lambda2} sin(theta) sin(phi)|-1>.
struct Spin1Params {
  double theta = 0.0;
  double phi = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

RealDiagonal sz_operator(SpinQuantumNumber s);

/// (|S> + |-S>)/sqrt(2), the optimal noise-free probe state.
PureState ghz_like_state(SpinQuantumNumber s);

PureState spin1_param_state(const Spin1Params& p);

/// exp(-i omega tau S_z) |psi>.
PureState evolve_noisefree(const PureState& psi, double omega, double tau);

/// Noise-averaged state after free precession under Gaussian dephasing:
///   rho_mn = psi_m conj(psi_n) exp(-i (m-n) omega tau) exp(-(m-n)^2 chi).
/// Throws std::invalid_argument if chi < 0.
DensityMatrix dephase(const PureState& psi, double omega, double tau, double chi);

/// |<a|b>|, insensitive to global phase.
double fidelity(const PureState& a, const PureState& b);

}  // namespace spinsense
