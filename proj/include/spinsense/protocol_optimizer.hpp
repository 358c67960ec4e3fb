#pragma once

// Optimization of the QFI yield rate R = max_tau F(tau)/tau (Fisher
// information per unit of evolution time), its asymptotic closed forms,
// parameter sweeps with power-law exponent fits, spin-1 probe-state
// optimization, and scaling under decoupling-modified decay.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinsense/noise_model.hpp"
#include "spinsense/spin_core.hpp"

namespace spinsense {

enum class YieldMethod { Numeric, AsymptoticQuasiStatic, AsymptoticMarkovian };

std::string_view to_string(YieldMethod method);

struct YieldResult {
  double rate = 0.0;
  double tau_opt = 0.0;
  NoiseRegime regime;
  YieldMethod method = YieldMethod::Numeric;
  /// The scan maximum sat on the first or last grid point.
  bool on_boundary = false;

  /// delta_omega_min * sqrt(T) for a total time budget T split into equal shots.
  double precision_per_root_time() const;
};

using QfiCurve = std::function<double(double)>;

inline constexpr std::size_t kYieldScanPoints = 200;
inline constexpr double kYieldScanSpan = 100.0;  // scan [scale / span, scale * span]
inline constexpr double kYieldTauTolerance = 1e-8;

/// Scan of F(tau)/tau on the log grid used by the optimizer.
struct YieldScan {
  std::vector<double> tau;
  std::vector<double> ratio;
};

YieldScan scan_yield(const QfiCurve& qfi, double time_scale, std::size_t points = kYieldScanPoints);

/// Number of strict interior local maxima of a sampled curve.
std::size_t count_local_maxima(std::span<const double> values);

/// Log-grid scan around `time_scale` followed by golden-section refinement in
/// log tau to relative tolerance 1e-8. The regime field is left default.
YieldResult maximize_yield(const QfiCurve& qfi, double time_scale);

/// Numeric yield rate for an arbitrary QFI curve of a spin-S probe; the scan
/// is centred on T2(S, noise).
YieldResult yield_rate(SpinQuantumNumber s, const OUNoise& noise, const QfiCurve& qfi);

/// Numeric yield rate of the GHZ-like probe.
YieldResult yield_rate(SpinQuantumNumber s, const OUNoise& noise);

/// Closed forms: sqrt(2/e) S/b with tau_opt = 1/(sqrt(2) 2Sb) (quasi-static),
/// 1/(2e b^2 tau_c) with tau_opt = 1/(2 (2Sb)^2 tau_c) (Markovian).
/// Throws std::invalid_argument for Regime::Intermediate.
YieldResult yield_rate_asymptotic(SpinQuantumNumber s, const OUNoise& noise, Regime regime);

enum class SweepParameter { Spin, Magnitude, MemoryTime };

std::string_view to_string(SweepParameter parameter);

/// Fit windows are the contiguous runs of rows on either side of these
/// Markovianity bounds.
inline constexpr double kFitMarkovianMax = 0.01;
inline constexpr double kFitQuasiStaticMin = 100.0;
inline constexpr std::size_t kMinFitPoints = 4;

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // in natural-log units
  std::size_t first = 0;      // window [first, last)
  std::size_t last = 0;
};

struct SweepRow {
  double value = 0.0;
  double rate = 0.0;
  double tau_opt = 0.0;
  double markov_param = 0.0;
  Regime regime = Regime::Intermediate;
  bool on_boundary = false;
};

struct WindowFit {
  std::string label;
  PowerLawFit fit;
};

struct SweepTable {
  SweepParameter parameter = SweepParameter::Spin;
  std::vector<SweepRow> rows;
  std::vector<WindowFit> fits;

  const PowerLawFit* find_fit(std::string_view label) const;
};

/// Values held fixed while one parameter is swept.
struct SweepFixed {
  double s = 0.5;
  double b = 1.0;
  double tau_c = 1.0;
};

/// n log-spaced points from lo to hi inclusive (n == 1 gives {lo}).
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Rounds to the nearest positive half-integer and removes duplicates.
std::vector<double> half_integer_grid(std::span<const double> values);

/// One GHZ yield-rate row per grid value, then exponent fits over the
/// "markovian" and "quasi_static" windows when each has enough points.
/// For SweepParameter::Spin grid values are rounded to half-integers first.
/// Throws std::invalid_argument for an empty grid.
SweepTable sweep(SweepParameter parameter, std::span<const double> grid, const SweepFixed& fixed);

/// Least-squares slope of log(rate) against log(value) over rows [first, last).
/// Throws std::invalid_argument for fewer than 4 rows or a nonpositive rate.
PowerLawFit fit_loglog_exponent(const SweepTable& table, std::size_t first, std::size_t last);

/// Same fit over raw samples.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Contiguous run of rows whose Markovianity parameter satisfies `keep`;
/// returns the longest such run, or nullopt when there is none.
std::optional<std::pair<std::size_t, std::size_t>> regime_window(const SweepTable& table,
                                                                 const std::function<bool(double)>& keep);

struct StateOptResult {
  double theta_opt = 0.0;
  double phi_opt = 0.0;
  double r_max = 0.0;
  double r_ghz = 0.0;
  double fidelity_with_ghz = 0.0;
  double tau_opt = 0.0;
};

/// Yield rate of the spin-1 probe with parameters (theta, phi); the phases
/// do not affect the Fisher information and are held at zero.
YieldResult spin1_yield(const OUNoise& noise, double theta, double phi);

/// 64 x 64 grid over [0, pi/2]^2 plus the GHZ-like point, then Nelder-Mead
/// from the five best candidates. Fidelity is against the GHZ-like state with
/// every phase set to zero.
StateOptResult optimize_initial_state_spin1(const OUNoise& noise);

/// GHZ yield rate versus S when chi is replaced by dd_chi; fits the exponent
/// over the whole grid (label "all").
SweepTable dd_scaling(const DDProfile& profile, std::span<const double> s_grid, const OUNoise& noise);

}  // namespace spinsense
