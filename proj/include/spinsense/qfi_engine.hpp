#pragma once

// Quantum Fisher information for estimating omega: closed forms for the
// GHZ-like probe and for the dephased spin-1 family, and a generic value from
// the eigendecomposition of rho (symmetric logarithmic derivative).

#include <string_view>

#include "spinsense/noise_model.hpp"
#include "spinsense/spin_core.hpp"

namespace spinsense {

enum class QfiMethod { ClosedFormGhz, ClosedFormSpin1, GenericSld };

std::string_view to_string(QfiMethod method);

struct QfiResult {
  double value = 0.0;
  QfiMethod method = QfiMethod::GenericSld;
};

/// Pairs of eigenvalues with p_i + p_j at or below this are dropped from the SLD sum.
inline constexpr double kSldCutoff = 1e-12;

/// Inputs further than this from Hermitian are rejected by qfi_generic.
inline constexpr double kHermitianInputTolerance = 1e-10;

/// (2S)^2 tau^2. Throws for tau < 0.
QfiResult qfi_noisefree_ghz(SpinQuantumNumber s, double tau);

/// (2S)^2 tau^2 exp(-2 (2S)^2 chi), for an already evaluated chi.
QfiResult qfi_ghz_from_chi(SpinQuantumNumber s, double chi, double tau);

/// (2S)^2 tau^2 exp(-2 (2S)^2 chi(tau)).
QfiResult qfi_noisy_ghz(SpinQuantumNumber s, const OUNoise& noise, double tau);

/// Closed-form QFI of the dephased spin-1 state. Depends on theta and phi
/// only; lambda1 and lambda2 drop out. Finite for every argument: at the two
/// basis states |0> and |-1>, where the expression is 0/0, the limit 0 is returned.
QfiResult qfi_spin1_closed(const Spin1Params& p, double chi, double tau);

/// Generic QFI: sum over eigenpairs of rho with p_i + p_j > cutoff of
/// 2 |<i|drho|j>|^2 / (p_i + p_j). Throws std::invalid_argument if drho is
/// not Hermitian within kHermitianInputTolerance or has the wrong shape.
QfiResult qfi_generic(const DensityMatrix& rho, const ComplexMatrix& drho, double cutoff = kSldCutoff);

/// Exact d rho / d omega of dephase(psi, omega, tau, chi): entry (m, n) times -i (m - n) tau.
ComplexMatrix drho_domega(const PureState& psi, double omega, double tau, double chi);

/// Quantum Cramer-Rao bound 1 / sqrt(nu F). Throws for F <= 0 or nu < 1.
double min_error(const QfiResult& f, double nu);

namespace detail {

/// The spin-1 QFI exactly as it is usually printed, in cot(theta), cot(phi)
/// form. Singular on theta, phi in {0, pi/2}; kept to cross-check the
/// rewritten form at interior points.
double qfi_spin1_cot_form(double theta, double phi, double chi, double tau);

}  // namespace detail

}  // namespace spinsense
