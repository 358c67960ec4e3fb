#include <random>
#include <vector>

#include "doctest.h"
#include "spinsense/kernels.hpp"

using namespace spinsense::kernels;

namespace {

std::vector<Isa> simd_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

void run_ou(Isa isa, std::vector<double>& x, std::vector<double>& ph, const std::vector<double>& n) {
  switch (isa) {
    case Isa::Scalar: scalar::ou_advance(x, ph, n, 0.93, 0.41, 0.005); break;
#if defined(__x86_64__)
    case Isa::Avx2: avx2::ou_advance(x, ph, n, 0.93, 0.41, 0.005); break;
#endif
#if defined(__aarch64__)
    case Isa::Neon: neon::ou_advance(x, ph, n, 0.93, 0.41, 0.005); break;
#endif
    default: FAIL("isa not built");
  }
}

double run_sld(Isa isa, const std::vector<double>& p, const std::vector<double>& m, double cut) {
  switch (isa) {
    case Isa::Scalar: return scalar::sld_weighted_sum(p, m, cut);
#if defined(__x86_64__)
    case Isa::Avx2: return avx2::sld_weighted_sum(p, m, cut);
#endif
#if defined(__aarch64__)
    case Isa::Neon: return neon::sld_weighted_sum(p, m, cut);
#endif
    default: FAIL("isa not built");
  }
  return 0.0;
}

}  // namespace

TEST_CASE("scalar is always available and the dispatcher honours overrides") {
  CHECK(isa_available(Isa::Scalar));
  set_isa_override(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  set_isa_override(std::nullopt);
  MESSAGE("active kernel isa: " << to_string(active_isa()));
#if defined(__x86_64__)
  CHECK(!isa_available(Isa::Neon));
  set_isa_override(Isa::Neon);
  CHECK(active_isa() == Isa::Scalar);
  set_isa_override(std::nullopt);
#endif
}

TEST_CASE("ou_advance matches the scalar reference bit for bit") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (Isa isa : simd_isas()) {
    for (std::size_t len = 0; len <= 67; ++len) {
      std::vector<double> x(len), ph(len), n(len);
      for (std::size_t i = 0; i < len; ++i) {
        x[i] = nd(rng);
        ph[i] = nd(rng);
        n[i] = nd(rng);
      }
      auto xs = x, ps = ph, xv = x, pv = ph;
      for (int step = 0; step < 5; ++step) {
        run_ou(Isa::Scalar, xs, ps, n);
        run_ou(isa, xv, pv, n);
      }
      CHECK(xs == xv);
      CHECK(ps == pv);
    }
  }
}

TEST_CASE("sld_weighted_sum matches the scalar reference to rounding") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 1; n <= 19; ++n) {
    std::vector<double> p(n), m(n * n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (i % 3 == 0) ? 0.0 : u(rng);
    for (auto& v : m) v = u(rng);
    const double ref = run_sld(Isa::Scalar, p, m, 1e-12);
    for (Isa isa : simd_isas()) {
      const double got = run_sld(isa, p, m, 1e-12);
      CHECK(std::abs(got - ref) <= 1e-14 * std::abs(ref) + 1e-300);
    }
  }
}

TEST_CASE("sld_weighted_sum drops pairs at or below the cutoff") {
  const std::vector<double> p{1.0, 0.0, 0.0};
  std::vector<double> m(9, 1.0);
  // Pairs (0,0), (0,1), (0,2), (1,0), (2,0) survive: 2/2 + 4 * 2/1.
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) continue;
    CHECK(run_sld(isa, p, m, 1e-12) == doctest::Approx(9.0));
  }
}
