#include "spinsense/qfi_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinsense/kernels.hpp"

namespace spinsense {

std::string_view to_string(QfiMethod method) {
  switch (method) {
    case QfiMethod::ClosedFormGhz: return "closed_form_ghz";
    case QfiMethod::ClosedFormSpin1: return "closed_form_spin1";
    case QfiMethod::GenericSld: return "generic_sld";
  }
  return "unknown";
}

QfiResult qfi_noisefree_ghz(SpinQuantumNumber s, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("qfi: tau must be >= 0");
  const double k = s.two_s() * tau;
  return {k * k, QfiMethod::ClosedFormGhz};
}

QfiResult qfi_ghz_from_chi(SpinQuantumNumber s, double chi_value, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("qfi: tau must be >= 0");
  const double k = static_cast<double>(s.two_s());
  const double kt = k * tau;
  // exp underflows to exactly zero for large arguments.
  return {kt * kt * std::exp(-2.0 * k * k * chi_value), QfiMethod::ClosedFormGhz};
}

QfiResult qfi_noisy_ghz(SpinQuantumNumber s, const OUNoise& noise, double tau) {
  return qfi_ghz_from_chi(s, chi(noise, tau), tau);
}

QfiResult qfi_spin1_closed(const Spin1Params& p, double chi_value, double tau) {
  if (!(chi_value >= 0.0)) throw std::invalid_argument("qfi_spin1_closed: chi must be >= 0");
  // Printed cot-form multiplied through by sin^4(theta) sin^4(phi), then
  // numerator scaled by e^{-12 chi} and denominator by e^{-6 chi} so that
  // only powers of g = e^{-2 chi} <= 1 appear.
  const double g = std::exp(-2.0 * chi_value);
  const double g2 = g * g, g3 = g2 * g;
  const double ct = std::cos(p.theta), st = std::sin(p.theta);
  const double cp = std::cos(p.phi), sp = std::sin(p.phi);
  const double ct2 = ct * ct, st2 = st * st, cp2 = cp * cp, sp2 = sp * sp;
  const double ct4 = ct2 * ct2, st4 = st2 * st2, cp4 = cp2 * cp2, sp4 = sp2 * sp2;
  const double geom = 1.0 + g + g2 + g3;

  const double num = cp4 * sp4 * st4 +
                     ct4 * (cp4 + 4.0 * g3 * geom * sp4 + 2.0 * (1.0 + g + 2.0 * g3) * cp2 * sp2) +
                     ct2 * st2 * ((2.0 + 4.0 * g - 4.0 * g2) * cp4 * sp2 + 2.0 * (1.0 + g + 2.0 * g3) * cp2 * sp4);
  const double den = ct4 * (cp2 + geom * sp2) +
                     ct2 * st2 * (2.0 * (1.0 + g + g2) * cp2 * sp2 + geom * sp4 + cp4) + st4 * cp2 * sp2;
  if (den <= 0.0) return {0.0, QfiMethod::ClosedFormSpin1};
  return {4.0 * tau * tau * st2 * g * num / den, QfiMethod::ClosedFormSpin1};
}

namespace detail {

double qfi_spin1_cot_form(double theta, double phi, double chi_value, double tau) {
  const auto e = [&](double k) { return std::exp(k * chi_value); };
  const double cot_t = 1.0 / std::tan(theta), cot_p = 1.0 / std::tan(phi);
  const double ct2 = cot_t * cot_t, cp2 = cot_p * cot_p;
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double c2 = cphi * cphi, s2 = sphi * sphi;
  const double num =
      ct2 * ct2 * (e(12) * cp2 * cp2 + 2.0 * e(6) * (e(4) + e(6) + 2.0) * cp2 + 4.0 * (e(2) + e(4) + e(6) + 1.0)) +
      2.0 * e(6) * ct2 * c2 * (e(2) * (2.0 * e(2) + e(4) - 2.0) * cp2 + e(4) + e(6) + 2.0) + e(12) * c2 * c2;
  const double den = (e(2) + e(4) + e(6) + 1.0) * ct2 * s2 * (ct2 + s2) + e(6) * c2 * c2 * (ct2 + s2) +
                     e(2) * c2 * (2.0 * (e(2) + e(4) + 1.0) * ct2 * s2 + e(4) * ct2 * ct2 + e(4) * s2 * s2);
  const double st = std::sin(theta);
  return 4.0 * tau * tau * e(-8) * st * st * s2 * s2 * num / den;
}

}  // namespace detail

QfiResult qfi_generic(const DensityMatrix& rho, const ComplexMatrix& drho, double cutoff) {
  const int dim = rho.dimension();
  if (drho.rows() != dim || drho.cols() != dim) throw std::invalid_argument("qfi_generic: drho has the wrong shape");
  if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > kHermitianInputTolerance) {
    throw std::invalid_argument("qfi_generic: drho is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.entries());
  if (solver.info() != Eigen::Success) throw std::runtime_error("qfi_generic: eigendecomposition failed");
  const ComplexMatrix& u = solver.eigenvectors();
  const ComplexMatrix d = u.adjoint() * drho * u;

  std::vector<double> p(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  std::vector<double> mag2(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) mag2[static_cast<std::size_t>(i) * dim + j] = std::norm(d(i, j));
  }
  return {kernels::sld_weighted_sum(p, mag2, cutoff), QfiMethod::GenericSld};
}

ComplexMatrix drho_domega(const PureState& psi, double omega, double tau, double chi_value) {
  const DensityMatrix rho = dephase(psi, omega, tau, chi_value);
  const int dim = rho.dimension();
  ComplexMatrix out(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      const double dm = static_cast<double>(l - k);  // m_k - m_l
      out(k, l) = Complex(0.0, -dm * tau) * rho(k, l);
    }
  }
  return out;
}

double min_error(const QfiResult& f, double nu) {
  if (!(f.value > 0.0)) throw std::invalid_argument("min_error: Fisher information must be > 0");
  if (!(nu >= 1.0)) throw std::invalid_argument("min_error: repetition count must be >= 1");
  return 1.0 / std::sqrt(nu * f.value);
}

}  // namespace spinsense
