#pragma once

// Ornstein-Uhlenbeck dephasing noise: autocorrelation b^2 exp(-|t - t'| / tau_c).
// chi(tau) is half the variance of the accumulated random phase; a coherence
// between levels differing by dm decays as exp(-dm^2 chi).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "spinsense/spin_core.hpp"

namespace spinsense {

class OUNoise {
 public:
  /// Throws std::invalid_argument unless b > 0 and tau_c > 0.
  OUNoise(double b, double tau_c);

  double b() const noexcept { return b_; }
  double tau_c() const noexcept { return tau_c_; }

 private:
  double b_;
  double tau_c_;
};

enum class Regime { Markovian, Intermediate, QuasiStatic };

std::string_view to_string(Regime regime);

// Bins on the Markovianity parameter 2 S b tau_c.
inline constexpr double kMarkovianBelow = 0.1;
inline constexpr double kQuasiStaticAbove = 10.0;

struct NoiseRegime {
  Regime regime = Regime::Intermediate;
  double markov_param = 0.0;
};

/// Short-time power law chi ~ x^n of a decoupling-modified decay, x = tau / tau_c.
struct DDProfile {
  /// Throws std::invalid_argument unless n >= 1 and shape > 0.
  explicit DDProfile(double n, double shape = 2.0);

  double n;
  double shape;
};

/// b^2 tau_c^2 (x + e^{-x} - 1), x = tau / tau_c. Throws for tau < 0.
double chi(const OUNoise& noise, double tau);

enum class Asymptote { Short, Long };

/// b^2 tau^2 / 2 (tau << tau_c) or b^2 tau_c tau (tau >> tau_c).
double chi_limit(const OUNoise& noise, double tau, Asymptote which);

/// Decoherence time: the root of (2S)^2 chi(T2) = 1.
double t2(SpinQuantumNumber s, const OUNoise& noise);

/// Root of (2S)^2 chi_fn(T) = 1 for an arbitrary increasing, unbounded chi_fn.
/// `guess` seeds the bracket search.
double decoherence_time(SpinQuantumNumber s, const std::function<double(double)>& chi_fn, double guess);

/// Asymptotic T2 forms: 1/(sqrt(2) S b) and 1/((2Sb)^2 tau_c).
double t2_quasi_static(SpinQuantumNumber s, const OUNoise& noise);
double t2_markovian(SpinQuantumNumber s, const OUNoise& noise);

NoiseRegime classify(SpinQuantumNumber s, const OUNoise& noise);

/// Name of the pseudo-random scheme; recorded in run manifests.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 per path, seeded splitmix64(seed, path); normals via boost::random::normal_distribution (ziggurat)";

/// Seed of path `index` within a run seeded by `seed`.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index);

/// Stationary OU path x_0..x_steps (steps + 1 values) from the exact
/// discretization x_{k+1} = x_k e^{-dt/tau_c} + b sqrt(1 - e^{-2dt/tau_c}) xi_k,
/// x_0 ~ N(0, b^2). Uses the generator of path_seed(seed, 0).
/// Throws std::invalid_argument if dt <= 0 or steps == 0.
std::vector<double> sample_ou_path(const OUNoise& noise, double dt, std::size_t steps, std::uint64_t seed);

struct CoherenceEstimate {
  std::complex<double> mean;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t paths = 0;
  std::size_t steps = 0;
};

/// Monte Carlo estimate of E[exp(-i 2S phi(tau))] with phi the trapezoidal
/// integral of a sampled OU path. The effective step is tau / ceil(tau / dt).
/// Throws std::invalid_argument if paths < 100, dt <= 0, or dt > tau_c / 20.
CoherenceEstimate mc_coherence(SpinQuantumNumber s, const OUNoise& noise, double tau, std::size_t paths,
                               double dt, std::uint64_t seed);

/// Decoupling-modified decay with the free-evolution long-time law:
///   b^2 tau_c^2 x^n / (shape + x^{n-1}).
double dd_chi(const OUNoise& noise, const DDProfile& profile, double tau);

}  // namespace spinsense
