#include "spinsense/protocol_optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinsense/minimize.hpp"
#include "spinsense/qfi_engine.hpp"

namespace spinsense {

std::string_view to_string(YieldMethod method) {
  switch (method) {
    case YieldMethod::Numeric: return "numeric";
    case YieldMethod::AsymptoticQuasiStatic: return "asymptotic_quasi_static";
    case YieldMethod::AsymptoticMarkovian: return "asymptotic_markovian";
  }
  return "unknown";
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::Spin: return "s";
    case SweepParameter::Magnitude: return "b";
    case SweepParameter::MemoryTime: return "tau-c";
  }
  return "unknown";
}

double YieldResult::precision_per_root_time() const { return rate > 0.0 ? 1.0 / std::sqrt(rate) : INFINITY; }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: need 0 < lo <= hi");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> half_integer_grid(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(std::max(1.0, std::round(2.0 * v)) / 2.0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

YieldScan scan_yield(const QfiCurve& qfi, double time_scale, std::size_t points) {
  YieldScan scan;
  scan.tau = log_grid(time_scale / kYieldScanSpan, time_scale * kYieldScanSpan, points);
  scan.ratio.reserve(points);
  for (double t : scan.tau) scan.ratio.push_back(qfi(t) / t);
  return scan;
}

std::size_t count_local_maxima(std::span<const double> values) {
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) ++count;
  }
  return count;
}

YieldResult maximize_yield(const QfiCurve& qfi, double time_scale) {
  if (!(time_scale > 0.0) || !std::isfinite(time_scale)) throw std::invalid_argument("maximize_yield: bad time scale");
  const YieldScan scan = scan_yield(qfi, time_scale);
  const std::size_t n = scan.tau.size();
  const auto best = static_cast<std::size_t>(std::max_element(scan.ratio.begin(), scan.ratio.end()) - scan.ratio.begin());

  YieldResult out;
  out.on_boundary = best == 0 || best + 1 == n;
  out.rate = scan.ratio[best];
  out.tau_opt = scan.tau[best];

  const double lo = std::log(scan.tau[best == 0 ? 0 : best - 1]);
  const double hi = std::log(scan.tau[std::min(best + 1, n - 1)]);
  const auto objective = [&](double log_tau) {
    const double t = std::exp(log_tau);
    return qfi(t) / t;
  };
  const ScalarOptimum refined = golden_section_maximize(objective, lo, hi, kYieldTauTolerance);
  if (refined.value >= out.rate) {
    out.rate = refined.value;
    out.tau_opt = std::exp(refined.x);
  }
  return out;
}

YieldResult yield_rate(SpinQuantumNumber s, const OUNoise& noise, const QfiCurve& qfi) {
  YieldResult out = maximize_yield(qfi, t2(s, noise));
  out.regime = classify(s, noise);
  return out;
}

YieldResult yield_rate(SpinQuantumNumber s, const OUNoise& noise) {
  return yield_rate(s, noise, [&](double t) { return qfi_noisy_ghz(s, noise, t).value; });
}

YieldResult yield_rate_asymptotic(SpinQuantumNumber s, const OUNoise& noise, Regime regime) {
  const double sv = s.value(), b = noise.b(), tc = noise.tau_c();
  const double k = 2.0 * sv * b;
  YieldResult out;
  out.regime = classify(s, noise);
  switch (regime) {
    case Regime::QuasiStatic:
      out.rate = std::sqrt(2.0 / std::numbers::e) * sv / b;
      out.tau_opt = 1.0 / (std::sqrt(2.0) * k);
      out.method = YieldMethod::AsymptoticQuasiStatic;
      return out;
    case Regime::Markovian:
      out.rate = 1.0 / (2.0 * std::numbers::e * b * b * tc);
      out.tau_opt = 1.0 / (2.0 * k * k * tc);
      out.method = YieldMethod::AsymptoticMarkovian;
      return out;
    case Regime::Intermediate: break;
  }
  throw std::invalid_argument("yield_rate_asymptotic: no closed form in the intermediate regime");
}

const PowerLawFit* SweepTable::find_fit(std::string_view label) const {
  for (const auto& f : fits) {
    if (f.label == label) return &f.fit;
  }
  return nullptr;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < kMinFitPoints) throw std::invalid_argument("fit_power_law: need at least 4 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_power_law: values must be > 0");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_law: abscissae are all equal");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(ly[i] - (fit.intercept + fit.slope * lx[i])));
  }
  fit.first = 0;
  fit.last = n;
  return fit;
}

PowerLawFit fit_loglog_exponent(const SweepTable& table, std::size_t first, std::size_t last) {
  if (last > table.rows.size() || first > last) throw std::invalid_argument("fit_loglog_exponent: bad window");
  std::vector<double> x, y;
  for (std::size_t i = first; i < last; ++i) {
    x.push_back(table.rows[i].value);
    y.push_back(table.rows[i].rate);
  }
  PowerLawFit fit = fit_power_law(x, y);
  fit.first = first;
  fit.last = last;
  return fit;
}

std::optional<std::pair<std::size_t, std::size_t>> regime_window(const SweepTable& table,
                                                                 const std::function<bool(double)>& keep) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  std::size_t i = 0;
  const std::size_t n = table.rows.size();
  while (i < n) {
    if (!keep(table.rows[i].markov_param)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && keep(table.rows[j].markov_param)) ++j;
    if (!best || j - i > best->second - best->first) best = std::make_pair(i, j);
    i = j;
  }
  return best;
}

namespace {

void add_window_fit(SweepTable& table, std::string label, const std::function<bool(double)>& keep) {
  const auto window = regime_window(table, keep);
  if (!window || window->second - window->first < kMinFitPoints) return;
  table.fits.push_back({std::move(label), fit_loglog_exponent(table, window->first, window->second)});
}

SweepRow make_row(double value, SpinQuantumNumber s, const OUNoise& noise, const YieldResult& y) {
  SweepRow row;
  row.value = value;
  row.rate = y.rate;
  row.tau_opt = y.tau_opt;
  const NoiseRegime regime = classify(s, noise);
  row.markov_param = regime.markov_param;
  row.regime = regime.regime;
  row.on_boundary = y.on_boundary;
  return row;
}

}  // namespace

SweepTable sweep(SweepParameter parameter, std::span<const double> grid, const SweepFixed& fixed) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<double> values(grid.begin(), grid.end());
  if (parameter == SweepParameter::Spin) values = half_integer_grid(values);
  else std::sort(values.begin(), values.end());

  SweepTable table;
  table.parameter = parameter;
  table.rows.reserve(values.size());
  for (double v : values) {
    const SpinQuantumNumber s = SpinQuantumNumber::from_value(parameter == SweepParameter::Spin ? v : fixed.s);
    const OUNoise noise(parameter == SweepParameter::Magnitude ? v : fixed.b,
                        parameter == SweepParameter::MemoryTime ? v : fixed.tau_c);
    table.rows.push_back(make_row(v, s, noise, yield_rate(s, noise)));
  }
  add_window_fit(table, "markovian", [](double m) { return m <= kFitMarkovianMax; });
  add_window_fit(table, "quasi_static", [](double m) { return m >= kFitQuasiStaticMin; });
  return table;
}

YieldResult spin1_yield(const OUNoise& noise, double theta, double phi) {
  const SpinQuantumNumber one(2);
  const Spin1Params p{theta, phi, 0.0, 0.0};
  return yield_rate(one, noise, [&](double t) { return qfi_spin1_closed(p, chi(noise, t), t).value; });
}

namespace {

// cos(theta), sin(theta)cos(phi), sin(theta)sin(phi) up to signs, which the
// phases absorb; map back onto [0, pi/2]^2.
std::pair<double, double> fold_angles(double theta, double phi) {
  const double t = std::atan2(std::abs(std::sin(theta)), std::abs(std::cos(theta)));
  const double f = std::atan2(std::abs(std::sin(phi)), std::abs(std::cos(phi)));
  return {t, f};
}

}  // namespace

StateOptResult optimize_initial_state_spin1(const OUNoise& noise) {
  constexpr int kGrid = 64;
  constexpr std::size_t kStarts = 5;
  const double half_pi = std::numbers::pi / 2.0;
  const double ghz_theta = std::numbers::pi / 4.0, ghz_phi = half_pi;

  struct Candidate {
    double theta, phi, rate;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(kGrid * kGrid + 1);
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double th = half_pi * i / (kGrid - 1), ph = half_pi * j / (kGrid - 1);
      candidates.push_back({th, ph, spin1_yield(noise, th, ph).rate});
    }
  }
  const double r_ghz = spin1_yield(noise, ghz_theta, ghz_phi).rate;
  candidates.push_back({ghz_theta, ghz_phi, r_ghz});
  std::partial_sort(candidates.begin(), candidates.begin() + kStarts, candidates.end(),
                    [](const Candidate& a, const Candidate& b) { return a.rate > b.rate; });

  Candidate best = candidates.front();
  const auto objective = [&](const std::array<double, 2>& v) { return -spin1_yield(noise, v[0], v[1]).rate; };
  std::vector<Candidate> starts(candidates.begin(), candidates.begin() + kStarts);
  starts.push_back({ghz_theta, ghz_phi, r_ghz});
  for (const Candidate& c : starts) {
    const auto opt = nelder_mead_minimize<2>(objective, {c.theta, c.phi}, half_pi / (kGrid - 1), 1e-6, 1e-14);
    if (-opt.value > best.rate) {
      const auto [t, f] = fold_angles(opt.x[0], opt.x[1]);
      best = {t, f, -opt.value};
    }
  }

  StateOptResult out;
  out.theta_opt = best.theta;
  out.phi_opt = best.phi;
  out.r_max = best.rate;
  out.r_ghz = r_ghz;
  out.tau_opt = spin1_yield(noise, best.theta, best.phi).tau_opt;
  out.fidelity_with_ghz =
      fidelity(spin1_param_state({best.theta, best.phi, 0.0, 0.0}), ghz_like_state(SpinQuantumNumber(2)));
  return out;
}

SweepTable dd_scaling(const DDProfile& profile, std::span<const double> s_grid, const OUNoise& noise) {
  if (s_grid.empty()) throw std::invalid_argument("dd_scaling: empty grid");
  const std::vector<double> values = half_integer_grid(s_grid);
  SweepTable table;
  table.parameter = SweepParameter::Spin;
  for (double v : values) {
    const SpinQuantumNumber s = SpinQuantumNumber::from_value(v);
    const auto chi_dd = [&](double t) { return dd_chi(noise, profile, t); };
    const double scale = decoherence_time(s, chi_dd, t2(s, noise));
    YieldResult y = maximize_yield([&](double t) { return qfi_ghz_from_chi(s, chi_dd(t), t).value; }, scale);
    table.rows.push_back(make_row(v, s, noise, y));
  }
  if (table.rows.size() >= kMinFitPoints) {
    table.fits.push_back({"all", fit_loglog_exponent(table, 0, table.rows.size())});
  }
  return table;
}

}  // namespace spinsense
