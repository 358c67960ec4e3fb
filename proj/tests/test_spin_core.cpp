#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spinsense/spin_core.hpp"
#include "test_support.hpp"

using namespace spinsense;
using spinsense::testing::random_state;

TEST_CASE("spin quantum number keeps half-integers exact") {
  const auto half = SpinQuantumNumber::from_value(0.5);
  CHECK(half.two_s() == 1);
  CHECK(half.dimension() == 2);
  CHECK(SpinQuantumNumber::from_value(4).dimension() == 9);
  CHECK(SpinQuantumNumber(3).value() == 1.5);
  CHECK_THROWS_AS(SpinQuantumNumber(0), std::invalid_argument);
  CHECK_THROWS_AS(SpinQuantumNumber::from_value(0.3), std::invalid_argument);
  CHECK_THROWS_AS(SpinQuantumNumber::from_value(-1.0), std::invalid_argument);
}

TEST_CASE("sz diagonal runs from +S to -S") {
  const auto half = sz_operator(SpinQuantumNumber(1)).diagonal();
  CHECK(half[0] == 0.5);
  CHECK(half[1] == -0.5);
  const auto one = sz_operator(SpinQuantumNumber(2)).diagonal();
  CHECK(one[0] == 1.0);
  CHECK(one[1] == 0.0);
  CHECK(one[2] == -1.0);
  const auto four = sz_operator(SpinQuantumNumber(8)).diagonal();
  REQUIRE(four.size() == 9);
  for (int k = 0; k < 9; ++k) CHECK(four[k] == 4.0 - k);
}

TEST_CASE("ghz-like state") {
  const double h = 1.0 / std::sqrt(2.0);
  const auto half = ghz_like_state(SpinQuantumNumber(1));
  CHECK(std::abs(half[0] - Complex(h)) < 1e-15);
  CHECK(std::abs(half[1] - Complex(h)) < 1e-15);
  const auto four = ghz_like_state(SpinQuantumNumber(8));
  REQUIRE(four.dimension() == 9);
  for (int k = 0; k < 9; ++k) {
    const double expected = (k == 0 || k == 8) ? h : 0.0;
    CHECK(std::abs(four[k] - Complex(expected)) < 1e-15);
  }
}

TEST_CASE("spin-1 parameterized state") {
  const double pi = std::numbers::pi;
  const auto ghz = spin1_param_state({pi / 4, pi / 2, 0, 0});
  CHECK(spinsense::testing::same_ray(ghz, ghz_like_state(SpinQuantumNumber(2)), 1e-14));
  CHECK(std::abs(ghz[1]) < 1e-15);

  const auto up = spin1_param_state({0, 0.7, 1.0, 2.0});
  CHECK(std::abs(up[0] - Complex(1.0)) < 1e-15);

  const auto mixed = spin1_param_state({pi / 4, pi / 4, 0, 0});
  CHECK(std::abs(mixed[0] - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(mixed[1] - Complex(0.5)) < 1e-15);
  CHECK(std::abs(mixed[2] - Complex(0.5)) < 1e-15);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const auto s = spin1_param_state({u(rng), u(rng), u(rng), u(rng)});
    CHECK(std::abs(s.amplitudes().squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("noise-free evolution") {
  std::mt19937_64 rng(1);
  const auto psi = random_state(SpinQuantumNumber(5), rng);
  CHECK(spinsense::testing::same_ray(evolve_noisefree(psi, 0.0, 3.0), psi, 1e-14));
  CHECK(spinsense::testing::same_ray(evolve_noisefree(psi, 2.0, 0.0), psi, 1e-14));

  const auto half = ghz_like_state(SpinQuantumNumber(1));
  CHECK(fidelity(evolve_noisefree(half, std::numbers::pi, 1.0), half) < 1e-15);

  const auto four = evolve_noisefree(ghz_like_state(SpinQuantumNumber(8)), std::numbers::pi / 8, 1.0);
  // exp(-i m omega tau) at m = +4 and m = -4 differ by exp(-i pi).
  const Complex ratio = four[0] / four[8];
  CHECK(std::abs(ratio - Complex(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("evolution preserves the norm") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int two_s = 1; two_s <= 16; ++two_s) {
    for (int i = 0; i < 20; ++i) {
      const auto psi = random_state(SpinQuantumNumber(two_s), rng);
      // Evolve the raw amplitudes without renormalization to see the true norm change.
      ComplexVector raw = psi.amplitudes();
      const double angle = u(rng) * u(rng);
      for (int k = 0; k < raw.size(); ++k) raw[k] *= std::polar(1.0, -(0.5 * two_s - k) * angle);
      CHECK(std::abs(raw.squaredNorm() - 1.0) < 1e-12);
      CHECK(std::abs(evolve_noisefree(psi, angle, 1.0).amplitudes().squaredNorm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("dephase without noise is the evolved projector") {
  std::mt19937_64 rng(3);
  for (int two_s = 1; two_s <= 8; ++two_s) {
    const auto psi = random_state(SpinQuantumNumber(two_s), rng);
    const auto rho = dephase(psi, 1.3, 0.7, 0.0);
    const auto phi = evolve_noisefree(psi, 1.3, 0.7);
    const ComplexMatrix proj = phi.amplitudes() * phi.amplitudes().adjoint();
    CHECK((rho.entries() - proj).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dephased ghz coherence") {
  for (int two_s : {1, 2, 5, 8}) {
    const SpinQuantumNumber s(two_s);
    const double chi = 0.013;
    const auto rho = dephase(ghz_like_state(s), 0.4, 1.1, chi);
    const int last = s.dimension() - 1;
    CHECK(std::abs(std::abs(rho(0, last)) - 0.5 * std::exp(-double(two_s * two_s) * chi)) < 1e-15);
    // Nothing outside the |S>, |-S> block.
    for (int k = 1; k < last; ++k) CHECK(std::abs(rho(k, k)) == 0.0);
  }
}

TEST_CASE("spin-1 coherences match a Monte Carlo phase average") {
  // Independent oracle: average exp(-i dm phi) over Gaussian phases with
  // variance 2 chi, which is what dephasing by a Gaussian field amounts to.
  const double pi = std::numbers::pi, chi = 0.1;
  const auto psi = spin1_param_state({pi / 4, pi / 4, 0, 0});
  const auto rho = dephase(psi, 0.0, 1.0, chi);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> phase(0.0, std::sqrt(2.0 * chi));
  const int n = 200000;
  double c1 = 0, c2 = 0;
  for (int i = 0; i < n; ++i) {
    const double p = phase(rng);
    c1 += std::cos(p);
    c2 += std::cos(2 * p);
  }
  c1 /= n;
  c2 /= n;
  const double d1 = std::abs(rho(0, 1)) / std::abs(psi[0] * psi[1]);
  const double d2 = std::abs(rho(0, 2)) / std::abs(psi[0] * psi[2]);
  CHECK(std::abs(d1 - std::exp(-0.1)) < 1e-14);
  CHECK(std::abs(d2 - std::exp(-0.4)) < 1e-14);
  CHECK(std::abs(d1 - c1) < 4 * std::sqrt(0.5 / n));
  CHECK(std::abs(d2 - c2) < 4 * std::sqrt(0.5 / n));
}

TEST_CASE("dephase rejects negative chi") {
  CHECK_THROWS_AS(dephase(ghz_like_state(SpinQuantumNumber(2)), 0, 1, -1e-3), std::invalid_argument);
}

TEST_CASE("dephase produces valid density matrices") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 3);
  for (int i = 0; i < 100; ++i) {
    const auto psi = random_state(SpinQuantumNumber(1 + i % 9), rng);
    const auto rho = dephase(psi, u(rng), u(rng), u(rng));
    CHECK_NOTHROW(DensityMatrix::from_matrix(rho.entries()));
    for (int k = 0; k < psi.dimension(); ++k) CHECK(std::abs(rho(k, k).real() - std::norm(psi[k])) < 1e-15);
  }
}

TEST_CASE("density matrix validation") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2) * 0.5;
  CHECK_NOTHROW(DensityMatrix::from_matrix(m));
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad_trace), std::invalid_argument);
  ComplexMatrix non_herm = m;
  non_herm(0, 1) = {0.0, 0.1};
  CHECK_THROWS_AS(DensityMatrix::from_matrix(non_herm), std::invalid_argument);
  ComplexMatrix negative(2, 2);
  negative << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(negative), std::invalid_argument);
}

TEST_CASE("spin-S ghz dephasing equals spin-1/2 with signal and noise scaled by 2S") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto half = ghz_like_state(SpinQuantumNumber(1));
  for (int two_s = 1; two_s <= 12; ++two_s) {
    const double omega = u(rng), tau = u(rng), chi = 0.1 * u(rng);
    const auto big = dephase(ghz_like_state(SpinQuantumNumber(two_s)), omega, tau, chi);
    const auto small = dephase(half, two_s * omega, tau, double(two_s) * two_s * chi);
    const int last = two_s;
    CHECK(std::abs(big(0, 0) - small(0, 0)) < 1e-12);
    CHECK(std::abs(big(0, last) - small(0, 1)) < 1e-12);
    CHECK(std::abs(big(last, 0) - small(1, 0)) < 1e-12);
    CHECK(std::abs(big(last, last) - small(1, 1)) < 1e-12);
  }
}

TEST_CASE("coherences shrink as chi grows") {
  std::mt19937_64 rng(6);
  const auto psi = random_state(SpinQuantumNumber(4), rng);
  ComplexMatrix prev = dephase(psi, 0.3, 0.9, 0.0).entries();
  for (double chi = 0.05; chi < 3.0; chi += 0.05) {
    const ComplexMatrix cur = dephase(psi, 0.3, 0.9, chi).entries();
    for (int k = 0; k < 5; ++k) {
      for (int l = 0; l < 5; ++l) {
        if (k != l) CHECK(std::abs(cur(k, l)) <= std::abs(prev(k, l)));
      }
    }
    prev = cur;
  }
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(8);
  const auto a = random_state(SpinQuantumNumber(3), rng);
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  ComplexVector e0 = ComplexVector::Zero(3), e1 = ComplexVector::Zero(3);
  e0[0] = 1;
  e1[1] = 1;
  CHECK(fidelity(PureState(e0), PureState(e1)) == 0.0);
  const double pi = std::numbers::pi;
  CHECK(fidelity(ghz_like_state(SpinQuantumNumber(2)), spin1_param_state({pi / 4, pi / 2, 0, 0})) ==
        doctest::Approx(1.0).epsilon(1e-14));
}
