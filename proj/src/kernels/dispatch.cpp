#include "spinsense/kernels.hpp"

#include <atomic>

namespace spinsense::kernels {

namespace {

#if defined(SPINSENSE_HAVE_AVX2)
bool cpu_has_avx2() {
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return has;
}
#endif

Isa detect() {
#if defined(SPINSENSE_HAVE_AVX2)
  if (cpu_has_avx2()) return Isa::Avx2;
#endif
#if defined(SPINSENSE_HAVE_NEON)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

// -1 means auto-detect.
std::atomic<int> g_override{-1};

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(SPINSENSE_HAVE_AVX2)
      return cpu_has_avx2();
#else
      return false;
#endif
    case Isa::Neon:
#if defined(SPINSENSE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect();
  return detected;
}

void set_isa_override(std::optional<Isa> isa) {
  if (!isa) {
    g_override.store(-1, std::memory_order_relaxed);
    return;
  }
  const Isa chosen = isa_available(*isa) ? *isa : Isa::Scalar;
  g_override.store(static_cast<int>(chosen), std::memory_order_relaxed);
}

void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt) {
  switch (active_isa()) {
#if defined(SPINSENSE_HAVE_AVX2)
    case Isa::Avx2: return avx2::ou_advance(x, phase, normals, decay, kick, half_dt);
#endif
#if defined(SPINSENSE_HAVE_NEON)
    case Isa::Neon: return neon::ou_advance(x, phase, normals, decay, kick, half_dt);
#endif
    default: return scalar::ou_advance(x, phase, normals, decay, kick, half_dt);
  }
}

double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff) {
  switch (active_isa()) {
#if defined(SPINSENSE_HAVE_AVX2)
    case Isa::Avx2: return avx2::sld_weighted_sum(eigenvalues, mag2, cutoff);
#endif
#if defined(SPINSENSE_HAVE_NEON)
    case Isa::Neon: return neon::sld_weighted_sum(eigenvalues, mag2, cutoff);
#endif
    default: return scalar::sld_weighted_sum(eigenvalues, mag2, cutoff);
  }
}

}  // namespace spinsense::kernels
