#pragma once

// Two-outcome measurement of the dephased GHZ-like probe, projecting onto
// (|S> +- |-S>)/sqrt(2), and a maximum-likelihood estimate of omega from
// repeated outcomes. With visibility V = exp(-(2S)^2 chi(tau)) and phase
// theta = 2S omega tau:
//
//     P+ = (1 + V cos theta) / 2,   P- = 1 - P+.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "spinsense/noise_model.hpp"
#include "spinsense/spin_core.hpp"

namespace spinsense {

struct OutcomeProbabilities {
  double plus = 0.5;
  double minus = 0.5;
};

OutcomeProbabilities outcome_probability(SpinQuantumNumber s, const OUNoise& noise, double tau, double omega);

/// (2S tau)^2 V^2 sin^2 theta / (1 - V^2 cos^2 theta). Equals the QFI at
/// theta = pi/2. Throws std::domain_error when an outcome probability is 0 or 1.
double classical_fisher(SpinQuantumNumber s, const OUNoise& noise, double tau, double omega);

class BinaryMeasurement {
 public:
  /// `working_point` selects the monotone branch of P+(omega) used to invert
  /// outcome frequencies.
  BinaryMeasurement(SpinQuantumNumber s, OUNoise noise, double tau, double working_point);

  double visibility() const noexcept { return visibility_; }
  double phase(double omega) const noexcept { return scale_ * omega; }
  OutcomeProbabilities probabilities(double omega) const;
  double fisher(double omega) const;

  /// Inverts an observed fraction of "+" outcomes on the working-point
  /// branch. nullopt when the fraction lies outside (P+ range) of that branch.
  std::optional<double> estimate(double plus_fraction) const;

 private:
  SpinQuantumNumber s_;
  OUNoise noise_;
  double tau_;
  double scale_;  // 2 S tau
  double visibility_;
  long branch_;
};

struct EstimationOptions {
  std::size_t repetitions = 500;
  /// Defaults to omega_true.
  std::optional<double> working_point;
};

struct EstimationRun {
  std::size_t nu = 0;
  double omega_true = 0.0;
  double omega_hat = 0.0;  // mean over accepted repetitions
  double bias = 0.0;
  double sample_std = 0.0;
  double crb = 0.0;  // 1 / sqrt(nu F(omega_true))
  std::size_t repetitions = 0;
  std::size_t flagged = 0;  // inversion failures, excluded from the statistics

  bool valid() const noexcept { return flagged < repetitions && repetitions - flagged >= 2; }
};

/// Draws nu binary outcomes per repetition from P+(omega_true), inverts each
/// fraction, and aggregates. Repetition r uses path_seed(seed, r).
/// Throws std::invalid_argument if nu == 0 or repetitions < 2, or if the
/// working point is not within pi/4 of a P+ inflection (theta = pi/2 + k pi).
EstimationRun simulate_and_estimate(SpinQuantumNumber s, const OUNoise& noise, double tau, double omega_true,
                                    std::size_t nu, std::uint64_t seed, const EstimationOptions& options = {});

/// Smallest omega > 0 with theta = pi/2 (the optimal working point).
double optimal_working_point(SpinQuantumNumber s, double tau);

}  // namespace spinsense
