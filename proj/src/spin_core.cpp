#include "spinsense/spin_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinsense {

SpinQuantumNumber::SpinQuantumNumber(int two_s) : two_s_(two_s) {
  if (two_s < 1) throw std::invalid_argument("spin quantum number requires 2S >= 1, got " + std::to_string(two_s));
}

SpinQuantumNumber SpinQuantumNumber::from_value(double s) {
  const double doubled = 2.0 * s;
  const double rounded = std::round(doubled);
  if (!std::isfinite(s) || rounded < 1.0 || std::abs(doubled - rounded) > 1e-9 || rounded > 2e9) {
    throw std::invalid_argument("spin quantum number must be a positive half-integer, got " + std::to_string(s));
  }
  return SpinQuantumNumber(static_cast<int>(rounded));
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) throw std::invalid_argument("pure state needs at least two amplitudes");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("pure state is not normalized: |psi|^2 = " + std::to_string(norm2));
  }
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 2) {
    throw std::invalid_argument("density matrix must be square with dimension >= 2");
  }
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const Complex trace = entries.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > kTraceTolerance) {
    throw std::invalid_argument("density matrix trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(entries, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(entries));
}

RealDiagonal sz_operator(SpinQuantumNumber s) {
  Eigen::VectorXd diag(s.dimension());
  for (int k = 0; k < s.dimension(); ++k) diag[k] = s.m(k);
  return RealDiagonal(diag);
}

PureState ghz_like_state(SpinQuantumNumber s) {
  ComplexVector amps = ComplexVector::Zero(s.dimension());
  const double h = 1.0 / std::sqrt(2.0);
  amps[0] = h;
  amps[s.dimension() - 1] = h;
  return PureState(std::move(amps));
}

PureState spin1_param_state(const Spin1Params& p) {
  ComplexVector amps(3);
  const double st = std::sin(p.theta);
  amps[0] = std::cos(p.theta);
  amps[1] = std::polar(st * std::cos(p.phi), p.lambda1);
  amps[2] = std::polar(st * std::sin(p.phi), p.lambda2);
  // Rounding in sin/cos can push the norm a few ulps off; renormalize.
  amps /= amps.norm();
  return PureState(std::move(amps));
}

PureState evolve_noisefree(const PureState& psi, double omega, double tau) {
  const SpinQuantumNumber s = psi.spin();
  ComplexVector out = psi.amplitudes();
  const double angle = omega * tau;
  for (int k = 0; k < s.dimension(); ++k) out[k] *= std::polar(1.0, -s.m(k) * angle);
  out /= out.norm();
  return PureState(std::move(out));
}

DensityMatrix dephase(const PureState& psi, double omega, double tau, double chi) {
  if (!(chi >= 0.0)) throw std::invalid_argument("dephasing exponent chi must be >= 0");
  const int dim = psi.dimension();
  const ComplexVector& a = psi.amplitudes();
  const double angle = omega * tau;
  ComplexMatrix rho(dim, dim);
  for (int k = 0; k < dim; ++k) {
    rho(k, k) = std::norm(a[k]);
    for (int l = k + 1; l < dim; ++l) {
      // m_k - m_l = l - k
      const double dm = static_cast<double>(l - k);
      const Complex v = a[k] * std::conj(a[l]) * std::polar(std::exp(-dm * dm * chi), -dm * angle);
      rho(k, l) = v;
      rho(l, k) = std::conj(v);
    }
  }
  return DensityMatrix(std::move(rho));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("fidelity of states with different dimension");
  return std::min(1.0, std::abs(a.amplitudes().dot(b.amplitudes())));
}

}  // namespace spinsense
