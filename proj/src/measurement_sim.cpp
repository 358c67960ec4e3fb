#include "spinsense/measurement_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace spinsense {

namespace {

double visibility_of(SpinQuantumNumber s, const OUNoise& noise, double tau) {
  const double k = static_cast<double>(s.two_s());
  return std::exp(-k * k * chi(noise, tau));
}

}  // namespace

OutcomeProbabilities outcome_probability(SpinQuantumNumber s, const OUNoise& noise, double tau, double omega) {
  if (!(tau >= 0.0)) throw std::invalid_argument("outcome_probability: tau must be >= 0");
  const double v = visibility_of(s, noise, tau);
  const double plus = 0.5 * (1.0 + v * std::cos(s.two_s() * omega * tau));
  return {plus, 1.0 - plus};
}

double classical_fisher(SpinQuantumNumber s, const OUNoise& noise, double tau, double omega) {
  const double v = visibility_of(s, noise, tau);
  const double theta = s.two_s() * omega * tau;
  const double c = std::cos(theta), sn = std::sin(theta);
  const double denom = 1.0 - v * v * c * c;
  if (!(denom > 0.0)) throw std::domain_error("classical_fisher: degenerate outcome probability");
  const double k = s.two_s() * tau;
  return k * k * v * v * sn * sn / denom;
}

BinaryMeasurement::BinaryMeasurement(SpinQuantumNumber s, OUNoise noise, double tau, double working_point)
    : s_(s), noise_(noise), tau_(tau), scale_(s.two_s() * tau), visibility_(visibility_of(s, noise, tau)) {
  if (!(tau > 0.0)) throw std::invalid_argument("BinaryMeasurement: tau must be > 0");
  branch_ = static_cast<long>(std::floor(phase(working_point) / std::numbers::pi));
}

OutcomeProbabilities BinaryMeasurement::probabilities(double omega) const {
  const double plus = 0.5 * (1.0 + visibility_ * std::cos(phase(omega)));
  return {plus, 1.0 - plus};
}

double BinaryMeasurement::fisher(double omega) const { return classical_fisher(s_, noise_, tau_, omega); }

std::optional<double> BinaryMeasurement::estimate(double plus_fraction) const {
  const double c = (2.0 * plus_fraction - 1.0) / visibility_;
  if (!(std::abs(c) < 1.0)) return std::nullopt;
  const double a = std::acos(c);
  const double pi = std::numbers::pi;
  // P+ falls on even branches and rises on odd ones.
  const double theta = (branch_ % 2 == 0) ? branch_ * pi + a : (branch_ + 1) * pi - a;
  return theta / scale_;
}

double optimal_working_point(SpinQuantumNumber s, double tau) {
  return std::numbers::pi / (2.0 * s.two_s() * tau);
}

EstimationRun simulate_and_estimate(SpinQuantumNumber s, const OUNoise& noise, double tau, double omega_true,
                                    std::size_t nu, std::uint64_t seed, const EstimationOptions& options) {
  if (nu == 0) throw std::invalid_argument("simulate_and_estimate: nu must be >= 1");
  if (options.repetitions < 2) throw std::invalid_argument("simulate_and_estimate: need >= 2 repetitions");
  const double working = options.working_point.value_or(omega_true);
  const BinaryMeasurement meas(s, noise, tau, working);

  const double pi = std::numbers::pi;
  const double theta0 = meas.phase(working);
  const double offset = std::remainder(theta0 - pi / 2.0, pi);
  if (std::abs(offset) > pi / 4.0 + 1e-12) {
    throw std::invalid_argument("simulate_and_estimate: working point is not within pi/4 of an optimal phase");
  }

  EstimationRun run;
  run.nu = nu;
  run.omega_true = omega_true;
  run.repetitions = options.repetitions;
  const double p_true = meas.probabilities(omega_true).plus;
  const double fisher = meas.fisher(omega_true);
  run.crb = 1.0 / std::sqrt(static_cast<double>(nu) * fisher);

  double sum = 0.0, sum2 = 0.0;
  std::size_t accepted = 0;
  for (std::size_t r = 0; r < options.repetitions; ++r) {
    std::mt19937_64 engine(path_seed(seed, r));
    std::binomial_distribution<std::size_t> outcomes(nu, p_true);
    const double fraction = static_cast<double>(outcomes(engine)) / static_cast<double>(nu);
    const auto est = nu >= 2 ? meas.estimate(fraction) : std::nullopt;
    if (!est) {
      ++run.flagged;
      continue;
    }
    // Center before squaring to keep the variance accurate.
    const double d = *est - omega_true;
    sum += d;
    sum2 += d * d;
    ++accepted;
  }
  if (accepted >= 2) {
    const double n = static_cast<double>(accepted);
    const double mean = sum / n;
    run.bias = mean;
    run.omega_hat = omega_true + mean;
    run.sample_std = std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)));
  } else {
    run.omega_hat = NAN;
    run.bias = NAN;
  }
  return run;
}

}  // namespace spinsense
