#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "doctest.h"
#include "spinsense/qfi_engine.hpp"
#include "test_support.hpp"

using namespace spinsense;
using spinsense::testing::log_uniform;
using spinsense::testing::random_state;
using spinsense::testing::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// 40-digit evaluations of (2S)^2 tau^2 exp(-2 (2S)^2 chi(tau)) at b=1, tau_c=0.1.
constexpr double kQfiS4Tau02 = 0.59856395310136201423;
constexpr double kQfiS8Tau007 = 0.45847047469125629804;

ComplexMatrix central_difference(const PureState& psi, double omega, double tau, double chi, double h) {
  return (dephase(psi, omega + h, tau, chi).entries() - dephase(psi, omega - h, tau, chi).entries()) / (2.0 * h);
}

ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = {n(rng), n(rng)};
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

}  // namespace

TEST_CASE("noise-free ghz qfi") {
  CHECK(qfi_noisefree_ghz(SpinQuantumNumber(1), 1.0).value == 1.0);
  CHECK(qfi_noisefree_ghz(SpinQuantumNumber(8), 0.2).value == doctest::Approx(2.56).epsilon(1e-15));
  CHECK(qfi_noisefree_ghz(SpinQuantumNumber(8), 0.0).value == 0.0);
  CHECK_THROWS_AS(qfi_noisefree_ghz(SpinQuantumNumber(1), -1.0), std::invalid_argument);
}

TEST_CASE("noisy ghz qfi") {
  const OUNoise noise(1.0, 0.1);
  const double s4 = qfi_noisy_ghz(SpinQuantumNumber(8), noise, 0.2).value;
  const double s8 = qfi_noisy_ghz(SpinQuantumNumber(16), noise, 0.07).value;
  CHECK(rel_diff(s4, kQfiS4Tau02) < 1e-13);
  CHECK(rel_diff(s8, kQfiS8Tau007) < 1e-13);
  // Peak heights quoted for b = 1, tau_c = 0.1.
  CHECK(std::abs(s4 - 0.6) < 0.02);
  CHECK(std::abs(s8 - 0.45) < 0.02);

  const OUNoise quiet(1e-9, 0.1);
  for (int two_s : {1, 2, 7, 16}) {
    for (double tau : {0.01, 0.3, 2.0}) {
      CHECK(rel_diff(qfi_noisy_ghz(SpinQuantumNumber(two_s), quiet, tau).value,
                     qfi_noisefree_ghz(SpinQuantumNumber(two_s), tau).value) < 1e-12);
    }
  }
  // Deep decay underflows to zero instead of producing NaN.
  CHECK(qfi_noisy_ghz(SpinQuantumNumber(200), OUNoise(10.0, 10.0), 100.0).value == 0.0);
}

TEST_CASE("noisy ghz qfi degrades monotonically with noise") {
  const SpinQuantumNumber s(5);
  double prev = INFINITY;
  for (double b = 0.01; b < 50; b *= 1.2) {
    const double f = qfi_noisy_ghz(s, OUNoise(b, 0.3), 0.4).value;
    CHECK(f <= prev);
    prev = f;
  }
  prev = INFINITY;
  for (double chi = 0.0; chi < 2.0; chi += 0.01) {
    const double f = qfi_ghz_from_chi(s, chi, 0.4).value;
    CHECK(f <= prev);
    prev = f;
  }
}

TEST_CASE("spin-1 closed form at the ghz point") {
  for (double chi : {0.0, 0.01, 0.3, 2.0}) {
    for (double tau : {0.1, 1.0, 3.0}) {
      const double f = qfi_spin1_closed({kPi / 4, kPi / 2, 0, 0}, chi, tau).value;
      CHECK(rel_diff(f, 4.0 * tau * tau * std::exp(-8.0 * chi)) < 1e-13);
      CHECK(rel_diff(f, qfi_ghz_from_chi(SpinQuantumNumber(2), chi, tau).value) < 1e-13);
    }
  }
  CHECK(qfi_spin1_closed({kPi / 4, kPi / 2, 0, 0}, 0.0, 1.5).value == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("spin-1 rewritten form equals the cot form at interior points") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(0.05, kPi / 2 - 0.05), chi(0.0, 3.0), tau(0.05, 4.0);
  for (int i = 0; i < 500; ++i) {
    const double t = angle(rng), p = angle(rng), c = chi(rng), s = tau(rng);
    CHECK(rel_diff(qfi_spin1_closed({t, p, 0, 0}, c, s).value, detail::qfi_spin1_cot_form(t, p, c, s)) < 1e-11);
  }
}

TEST_CASE("spin-1 closed form is finite on the boundary") {
  const std::vector<double> edges{0.0, kPi / 2, kPi, -kPi / 2};
  for (double t : edges) {
    for (double p : edges) {
      const double f = qfi_spin1_closed({t, p, 0, 0}, 0.3, 1.0).value;
      CHECK(std::isfinite(f));
      const auto psi = spin1_param_state({t, p, 0, 0});
      const double oracle = qfi_generic(dephase(psi, 0.0, 1.0, 0.3), drho_domega(psi, 0.0, 1.0, 0.3)).value;
      CHECK(std::abs(f - oracle) < 1e-10);
    }
  }
  // Huge chi must not overflow.
  CHECK(std::isfinite(qfi_spin1_closed({0.7, 0.9, 0, 0}, 400.0, 1.0).value));
}

TEST_CASE("generic qfi of pure noise-free ghz") {
  const auto psi = ghz_like_state(SpinQuantumNumber(1));
  for (double tau : {0.5, 1.0, 2.0}) {
    const auto rho = dephase(psi, 0.3, tau, 0.0);
    CHECK(rel_diff(qfi_generic(rho, drho_domega(psi, 0.3, tau, 0.0)).value, tau * tau) < 1e-12);
  }
}

TEST_CASE("generic qfi matches the noisy ghz closed form") {
  const OUNoise noise(1.0, 0.1);
  const SpinQuantumNumber s(8);
  const double tau = 0.2, c = chi(noise, tau);
  const auto psi = ghz_like_state(s);
  const auto rho = dephase(psi, 0.7, tau, c);
  const auto gen = qfi_generic(rho, drho_domega(psi, 0.7, tau, c));
  CHECK(gen.method == QfiMethod::GenericSld);
  CHECK(rel_diff(gen.value, qfi_noisy_ghz(s, noise, tau).value) < 1e-10);

  const double h = 1e-6;
  const auto fd = qfi_generic(rho, central_difference(psi, 0.7, tau, c, h));
  CHECK(rel_diff(fd.value, gen.value) < 1e-6);
}

TEST_CASE("analytic drho matches finite differences") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto zero = drho_domega(ghz_like_state(SpinQuantumNumber(4)), 0.4, 0.0, 0.1);
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  const auto half = ghz_like_state(SpinQuantumNumber(1));
  const auto rho = dephase(half, 0.3, 0.8, 0.05);
  const auto d = drho_domega(half, 0.3, 0.8, 0.05);
  CHECK(std::abs(d(0, 1) - Complex(0.0, -0.8) * rho(0, 1)) < 1e-15);
  CHECK(std::abs(d(0, 0)) == 0.0);

  for (int i = 0; i < 50; ++i) {
    const auto psi = random_state(SpinQuantumNumber(1 + i % 8), rng);
    const double omega = u(rng), tau = u(rng) + 0.1, c = 0.2 * u(rng);
    const ComplexMatrix exact = drho_domega(psi, omega, tau, c);
    const ComplexMatrix fd = central_difference(psi, omega, tau, c, 1e-5);
    CHECK((exact - fd).norm() <= 1e-8 * exact.norm());
    CHECK((exact - exact.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(exact.trace()) < 1e-15);
  }
}

TEST_CASE("generic qfi agrees with closed forms on random inputs") {
  std::mt19937_64 rng(51);
  const int spins[] = {1, 2, 3, 4, 8};
  std::uniform_real_distribution<double> angle(0.0, kPi / 2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SpinQuantumNumber s(spins[i % 5]);
    const OUNoise noise(log_uniform(rng, 0.1, 10.0), log_uniform(rng, 1e-2, 10.0));
    const double tau = t2(s, noise) * log_uniform(rng, 0.05, 2.0);
    const double c = chi(noise, tau);
    const auto ghz = ghz_like_state(s);
    const double g = qfi_generic(dephase(ghz, 0.2, tau, c), drho_domega(ghz, 0.2, tau, c)).value;
    worst = std::max(worst, rel_diff(g, qfi_noisy_ghz(s, noise, tau).value));

    const Spin1Params p{angle(rng), angle(rng), 0.0, 0.0};
    const auto psi = spin1_param_state(p);
    const double g1 = qfi_generic(dephase(psi, 0.2, tau, c), drho_domega(psi, 0.2, tau, c)).value;
    worst = std::max(worst, rel_diff(g1, qfi_spin1_closed(p, c, tau).value));
  }
  MESSAGE("worst relative disagreement: " << worst);
  CHECK(worst < 1e-8);
}

TEST_CASE("spin-1 qfi does not depend on the phases") {
  for (const auto& [t, p] : {std::pair{0.4, 1.1}, std::pair{1.2, 0.3}, std::pair{kPi / 4, kPi / 2}}) {
    const double chi = 0.37, tau = 1.3;
    const auto base = spin1_param_state({t, p, 0, 0});
    const double ref = qfi_generic(dephase(base, 0.0, tau, chi), drho_domega(base, 0.0, tau, chi)).value;
    for (double l1 = 0.0; l1 < 2 * kPi; l1 += 0.4) {
      for (double l2 = 0.0; l2 < 2 * kPi; l2 += 0.4) {
        const auto psi = spin1_param_state({t, p, l1, l2});
        const double f = qfi_generic(dephase(psi, 0.0, tau, chi), drho_domega(psi, 0.0, tau, chi)).value;
        CHECK(std::abs(f - ref) < 1e-10);
      }
    }
  }
}

TEST_CASE("generic qfi is invariant under a common unitary") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 40; ++i) {
    const auto psi = random_state(SpinQuantumNumber(1 + i % 6), rng);
    const auto rho = dephase(psi, 0.5, 0.9, 0.2);
    const auto d = drho_domega(psi, 0.5, 0.9, 0.2);
    const ComplexMatrix u = random_unitary(psi.dimension(), rng);
    ComplexMatrix rr = u * rho.entries() * u.adjoint();
    rr = 0.5 * (rr + rr.adjoint()).eval();
    ComplexMatrix dd = u * d * u.adjoint();
    dd = 0.5 * (dd + dd.adjoint()).eval();
    const double a = qfi_generic(rho, d).value;
    const double b = qfi_generic(DensityMatrix::from_matrix(rr), dd).value;
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, a));
  }
}

TEST_CASE("generic qfi rejects non-Hermitian derivatives") {
  const auto psi = ghz_like_state(SpinQuantumNumber(2));
  const auto rho = dephase(psi, 0.0, 1.0, 0.1);
  ComplexMatrix d = drho_domega(psi, 0.0, 1.0, 0.1);
  d(0, 2) += Complex(1e-6, 0.0);
  CHECK_THROWS_AS(qfi_generic(rho, d), std::invalid_argument);
  CHECK_THROWS_AS(qfi_generic(rho, ComplexMatrix::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("cramer-rao bound") {
  CHECK(min_error({4.0, QfiMethod::ClosedFormGhz}, 25.0) == doctest::Approx(0.1).epsilon(1e-15));
  const SpinQuantumNumber s(6);
  const double tau = 0.3, nu = 100;
  CHECK(rel_diff(min_error(qfi_noisefree_ghz(s, tau), nu), 1.0 / (std::sqrt(nu) * 6 * tau)) < 1e-14);
  const OUNoise noise(0.8, 0.2);
  const double expected = 1.0 / (std::sqrt(nu) * 6 * tau * std::exp(-36.0 * chi(noise, tau)));
  CHECK(rel_diff(min_error(qfi_noisy_ghz(s, noise, tau), nu), expected) < 1e-13);
  CHECK_THROWS_AS(min_error({0.0, QfiMethod::GenericSld}, 1), std::invalid_argument);
  CHECK_THROWS_AS(min_error({1.0, QfiMethod::GenericSld}, 0.5), std::invalid_argument);
}
