#include <cmath>
#include <numbers>
#include <random>

#include "reports.hpp"
#include "spinsense/measurement_sim.hpp"
#include "spinsense/noise_model.hpp"
#include "spinsense/protocol_optimizer.hpp"
#include "spinsense/qfi_engine.hpp"

using nlohmann::json;

namespace spinsense::cli {

namespace {

class Checks {
 public:
  void add(const std::string& name, double measured, double expected, double tolerance, const std::string& kind,
           bool pass) {
    all_ = all_ && pass;
    items_.push_back({{"name", name},
                      {"measured", measured},
                      {"expected", expected},
                      {"tolerance", tolerance},
                      {"tolerance_kind", kind},
                      {"pass", pass}});
  }
  void absolute(const std::string& name, double measured, double expected, double tol) {
    add(name, measured, expected, tol, "absolute", std::abs(measured - expected) <= tol);
  }
  void relative(const std::string& name, double measured, double expected, double tol) {
    add(name, measured, expected, tol, "relative", std::abs(measured - expected) <= tol * std::abs(expected));
  }
  json report(const std::string& suite, std::uint64_t seed) const {
    return {{"suite", suite}, {"seed", seed}, {"pass", all_}, {"checks", items_}};
  }

 private:
  json items_ = json::array();
  bool all_ = true;
};

std::string label(const char* f, auto... args) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void mc_suite(Checks& c, std::uint64_t seed) {
  struct Point {
    int two_s;
    double tau_c;
    double fraction;
  };
  const Point points[] = {{4, 25.0, 0.5}, {4, 25.0, 1.0}, {2, 0.5, 0.5}, {2, 0.5, 1.0}, {1, 0.09, 0.5}, {1, 0.09, 1.0}};
  std::uint64_t k = 0;
  for (const auto& p : points) {
    const SpinQuantumNumber s(p.two_s);
    const OUNoise noise(1.0, p.tau_c);
    const double tau = p.fraction * t2(s, noise);
    const auto est = mc_coherence(s, noise, tau, 20000, std::min(p.tau_c / 20, tau / 100), seed + k++);
    const double exact = std::exp(-double(p.two_s * p.two_s) * chi(noise, tau));
    const auto name = label("S=%g tau_c=%g tau=%.6g", s.value(), p.tau_c, tau);
    c.absolute(name + " re", est.mean.real(), exact, 3 * est.stderr_re);
    c.absolute(name + " im", est.mean.imag(), 0.0, 3 * est.stderr_im);
  }
}

void oracle_suite(Checks& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto log_u = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
  double ghz = 0, spin1 = 0, phases = 0;
  for (int i = 0; i < 300; ++i) {
    const SpinQuantumNumber s(1 + i % 8);
    const OUNoise noise(log_u(0.1, 10), log_u(1e-2, 10));
    const double tau = t2(s, noise) * log_u(0.05, 2.0);
    const double x = chi(noise, tau);
    const auto g = ghz_like_state(s);
    const double fg = qfi_generic(dephase(g, 0.0, tau, x), drho_domega(g, 0.0, tau, x)).value;
    const double cg = qfi_noisy_ghz(s, noise, tau).value;
    ghz = std::max(ghz, std::abs(fg - cg) / cg);

    const Spin1Params p{unit(rng) * std::numbers::pi / 2, unit(rng) * std::numbers::pi / 2, 0, 0};
    const auto psi = spin1_param_state(p);
    const double f1 = qfi_generic(dephase(psi, 0.0, tau, x), drho_domega(psi, 0.0, tau, x)).value;
    const double c1 = qfi_spin1_closed(p, x, tau).value;
    spin1 = std::max(spin1, std::abs(f1 - c1) / std::max(c1, 1e-300));

    const auto rot = spin1_param_state({p.theta, p.phi, 6 * unit(rng), 6 * unit(rng)});
    const double f2 = qfi_generic(dephase(rot, 0.0, tau, x), drho_domega(rot, 0.0, tau, x)).value;
    phases = std::max(phases, std::abs(f2 - f1) / std::max(1.0, f1));
  }
  c.absolute("ghz generic vs closed form, worst relative", ghz, 0.0, 1e-8);
  c.absolute("spin-1 generic vs closed form, worst relative", spin1, 0.0, 1e-8);
  c.absolute("spin-1 phase invariance, worst", phases, 0.0, 1e-10);
}

void estimator_suite(Checks& c, std::uint64_t seed) {
  const OUNoise noise(1.0, 0.1);
  for (int two_s : {1, 8, 16}) {
    const SpinQuantumNumber s(two_s);
    const double tau = yield_rate(s, noise).tau_opt;
    const double w = optimal_working_point(s, tau);
    c.relative(label("S=%g cfi at working point", s.value()), classical_fisher(s, noise, tau, w),
               qfi_noisy_ghz(s, noise, tau).value, 1e-12);
  }
  const SpinQuantumNumber s(8);
  const double tau = yield_rate(s, noise).tau_opt;
  const auto run = simulate_and_estimate(s, noise, tau, optimal_working_point(s, tau), 10000, seed, {2000, {}});
  const double n = double(run.repetitions - run.flagged);
  c.add("S=4 nu=1e4 std/crb", run.sample_std / run.crb, 1.0, 0.1, "interval [0.95, 1.10]",
        run.valid() && run.sample_std / run.crb >= 0.95 && run.sample_std / run.crb <= 1.10);
  c.absolute("S=4 nu=1e4 bias", run.bias, 0.0, 4 * run.sample_std / std::sqrt(n));
  c.absolute("S=4 flagged repetitions", double(run.flagged), 0.0, 0.0);
}

void dd_suite(Checks& c) {
  const auto qs_grid = log_grid(0.5, 50, 30);
  const auto mk_grid = log_grid(0.5, 5, 12);
  for (double n : {2.0, 3.0, 4.0}) {
    const auto* f = dd_scaling(DDProfile(n), qs_grid, OUNoise(1.0, 100.0)).find_fit("all");
    c.absolute(label("n=%g quasi-static exponent", n), f ? f->slope : NAN, 2 - 2 / n, 0.1);
    const auto* m = dd_scaling(DDProfile(n), mk_grid, OUNoise(1.0, 1e-4)).find_fit("all");
    c.absolute(label("n=%g markovian exponent", n), m ? m->slope : NAN, 0.0, 0.1);
  }
}

}  // namespace

json validation_report(const std::string& suite, std::uint64_t seed) {
  Checks c;
  if (suite == "mc") mc_suite(c, seed);
  else if (suite == "oracle") oracle_suite(c, seed);
  else if (suite == "estimator") estimator_suite(c, seed);
  else if (suite == "dd") dd_suite(c);
  else throw UsageError("unknown suite " + suite);
  return c.report(suite, seed);
}

}  // namespace spinsense::cli
