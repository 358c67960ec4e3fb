#include "spinsense/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/random/normal_distribution.hpp>

#include "spinsense/kernels.hpp"

namespace spinsense {

OUNoise::OUNoise(double b, double tau_c) : b_(b), tau_c_(tau_c) {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("noise magnitude b must be > 0");
  if (!(tau_c > 0.0) || !std::isfinite(tau_c)) throw std::invalid_argument("memory time tau_c must be > 0");
}

DDProfile::DDProfile(double n_, double shape_) : n(n_), shape(shape_) {
  if (!(n >= 1.0)) throw std::invalid_argument("decoupling exponent n must be >= 1");
  if (!(shape > 0.0)) throw std::invalid_argument("decoupling shape constant must be > 0");
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Markovian: return "markovian";
    case Regime::Intermediate: return "intermediate";
    case Regime::QuasiStatic: return "quasi_static";
  }
  return "unknown";
}

double chi(const OUNoise& noise, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("chi: tau must be >= 0");
  const double x = tau / noise.tau_c();
  const double scale = noise.b() * noise.b() * noise.tau_c() * noise.tau_c();
  if (x < 1e-4) {
    // x + e^{-x} - 1 loses all digits to cancellation here.
    return scale * x * x * (0.5 - x / 6.0 + x * x / 24.0);
  }
  return scale * (x + std::expm1(-x));
}

double chi_limit(const OUNoise& noise, double tau, Asymptote which) {
  const double b2 = noise.b() * noise.b();
  return which == Asymptote::Short ? 0.5 * b2 * tau * tau : b2 * noise.tau_c() * tau;
}

double t2_quasi_static(SpinQuantumNumber s, const OUNoise& noise) {
  return 1.0 / (std::sqrt(2.0) * s.value() * noise.b());
}

double t2_markovian(SpinQuantumNumber s, const OUNoise& noise) {
  const double k = s.two_s() * noise.b();
  return 1.0 / (k * k * noise.tau_c());
}

namespace {

double solve_unit_decay(SpinQuantumNumber s, const std::function<double(double)>& chi_fn, double lo, double hi) {
  const double k2 = static_cast<double>(s.two_s()) * s.two_s();
  auto f = [&](double t) { return k2 * chi_fn(t) - 1.0; };
  double flo = f(lo);
  double fhi = f(hi);
  for (int i = 0; i < 2000 && flo > 0.0; ++i) {
    hi = lo;
    fhi = flo;
    lo *= 0.5;
    flo = f(lo);
  }
  for (int i = 0; i < 2000 && fhi < 0.0; ++i) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  if (flo > 0.0 || fhi < 0.0) throw std::runtime_error("decoherence time: failed to bracket the root");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iterations = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::min(std::abs(a), std::abs(b)); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iterations);
  return 0.5 * (a + b);
}

}  // namespace

double t2(SpinQuantumNumber s, const OUNoise& noise) {
  // chi lies below both asymptotes, so their larger root is a lower bound.
  const double lo = std::max(t2_quasi_static(s, noise), t2_markovian(s, noise));
  return solve_unit_decay(s, [&](double t) { return chi(noise, t); }, lo, 2.0 * lo);
}

double decoherence_time(SpinQuantumNumber s, const std::function<double(double)>& chi_fn, double guess) {
  if (!(guess > 0.0)) throw std::invalid_argument("decoherence_time: guess must be > 0");
  return solve_unit_decay(s, chi_fn, guess, 2.0 * guess);
}

NoiseRegime classify(SpinQuantumNumber s, const OUNoise& noise) {
  const double param = s.two_s() * noise.b() * noise.tau_c();
  Regime r = Regime::Intermediate;
  if (param < kMarkovianBelow) r = Regime::Markovian;
  else if (param > kQuasiStaticAbove) r = Regime::QuasiStatic;
  return {r, param};
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl sequence position.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

class PathNormals {
 public:
  explicit PathNormals(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

struct OuStep {
  double decay;
  double kick;
};

OuStep ou_step(const OUNoise& noise, double dt) {
  const double r = dt / noise.tau_c();
  return {std::exp(-r), noise.b() * std::sqrt(-std::expm1(-2.0 * r))};
}

}  // namespace

std::vector<double> sample_ou_path(const OUNoise& noise, double dt, std::size_t steps, std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_ou_path: dt must be > 0");
  if (steps == 0) throw std::invalid_argument("sample_ou_path: steps must be >= 1");
  const OuStep step = ou_step(noise, dt);
  PathNormals normals(path_seed(seed, 0));
  std::vector<double> path(steps + 1);
  path[0] = noise.b() * normals();
  for (std::size_t k = 0; k < steps; ++k) path[k + 1] = step.decay * path[k] + step.kick * normals();
  return path;
}

CoherenceEstimate mc_coherence(SpinQuantumNumber s, const OUNoise& noise, double tau, std::size_t paths,
                               double dt, std::uint64_t seed) {
  if (paths < 100) throw std::invalid_argument("mc_coherence: need at least 100 paths");
  if (!(tau >= 0.0)) throw std::invalid_argument("mc_coherence: tau must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("mc_coherence: dt must be > 0");
  const double max_dt = noise.tau_c() / 20.0;
  if (dt > max_dt * (1.0 + 1e-12)) {
    throw std::invalid_argument("mc_coherence: dt = " + std::to_string(dt) + " exceeds the accuracy guard tau_c/20 = " +
                                std::to_string(max_dt));
  }
  CoherenceEstimate out;
  out.paths = paths;
  if (tau == 0.0) {
    out.mean = {1.0, 0.0};
    return out;
  }
  const auto steps = static_cast<std::size_t>(std::ceil(tau / dt - 1e-9));
  out.steps = steps;
  const double h = tau / static_cast<double>(steps);
  const OuStep step = ou_step(noise, h);
  const double k = static_cast<double>(s.two_s());

  constexpr std::size_t kBlock = 64;
  constexpr std::size_t kChunk = 512;
  std::vector<double> x(kBlock), phase(kBlock), normals(kBlock * kChunk);
  std::vector<PathNormals> gens;
  gens.reserve(kBlock);

  double sum_c = 0.0, sum_s = 0.0, sum_c2 = 0.0, sum_s2 = 0.0;
  for (std::size_t first = 0; first < paths; first += kBlock) {
    const std::size_t width = std::min(kBlock, paths - first);
    gens.clear();
    for (std::size_t p = 0; p < width; ++p) {
      gens.emplace_back(path_seed(seed, first + p));
      x[p] = noise.b() * gens[p]();
      phase[p] = 0.0;
    }
    const std::span<double> xs(x.data(), width);
    const std::span<double> ph(phase.data(), width);
    for (std::size_t done = 0; done < steps; done += kChunk) {
      const std::size_t len = std::min(kChunk, steps - done);
      // Step-major layout: row j holds the j-th draw of every path.
      for (std::size_t p = 0; p < width; ++p) {
        for (std::size_t j = 0; j < len; ++j) normals[j * width + p] = gens[p]();
      }
      for (std::size_t j = 0; j < len; ++j) {
        kernels::ou_advance(xs, ph, std::span<const double>(normals.data() + j * width, width), step.decay,
                            step.kick, 0.5 * h);
      }
    }
    for (std::size_t p = 0; p < width; ++p) {
      const double c = std::cos(k * phase[p]);
      const double sn = -std::sin(k * phase[p]);
      sum_c += c;
      sum_s += sn;
      sum_c2 += c * c;
      sum_s2 += sn * sn;
    }
  }
  const double n = static_cast<double>(paths);
  const double mc = sum_c / n;
  const double ms = sum_s / n;
  out.mean = {mc, ms};
  out.stderr_re = std::sqrt(std::max(0.0, (sum_c2 / n - mc * mc) / (n - 1.0)));
  out.stderr_im = std::sqrt(std::max(0.0, (sum_s2 / n - ms * ms) / (n - 1.0)));
  return out;
}

double dd_chi(const OUNoise& noise, const DDProfile& profile, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("dd_chi: tau must be >= 0");
  const double x = tau / noise.tau_c();
  const double scale = noise.b() * noise.b() * noise.tau_c() * noise.tau_c();
  if (x <= 1.0) return scale * std::pow(x, profile.n) / (profile.shape + std::pow(x, profile.n - 1.0));
  return scale * x / (profile.shape * std::pow(x, 1.0 - profile.n) + 1.0);
}

}  // namespace spinsense
