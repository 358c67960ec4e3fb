// Built on AArch64 only, where Advanced SIMD is architecturally guaranteed.

#include "spinsense/kernels.hpp"

#include <arm_neon.h>

namespace spinsense::kernels::neon {

void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt) {
  const std::size_t n = x.size();
  const float64x2_t vdecay = vdupq_n_f64(decay);
  const float64x2_t vkick = vdupq_n_f64(kick);
  const float64x2_t vhalf = vdupq_n_f64(half_dt);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x.data() + i);
    const float64x2_t ni = vld1q_f64(normals.data() + i);
    // vmulq + vaddq rather than vfmaq keeps results identical to scalar.
    const float64x2_t next = vaddq_f64(vmulq_f64(vdecay, xi), vmulq_f64(vkick, ni));
    const float64x2_t ph = vld1q_f64(phase.data() + i);
    vst1q_f64(phase.data() + i, vaddq_f64(ph, vmulq_f64(vhalf, vaddq_f64(xi, next))));
    vst1q_f64(x.data() + i, next);
  }
  for (; i < n; ++i) {
    const double next = decay * x[i] + kick * normals[i];
    phase[i] = phase[i] + half_dt * (x[i] + next);
    x[i] = next;
  }
}

double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff) {
  const std::size_t n = eigenvalues.size();
  const float64x2_t vcut = vdupq_n_f64(cutoff);
  const float64x2_t vtwo = vdupq_n_f64(2.0);
  const float64x2_t vone = vdupq_n_f64(1.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t pi = vdupq_n_f64(eigenvalues[i]);
    const double* row = mag2.data() + i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const float64x2_t denom = vaddq_f64(pi, vld1q_f64(eigenvalues.data() + j));
      const uint64x2_t keep = vcgtq_f64(denom, vcut);
      const float64x2_t safe = vbslq_f64(keep, denom, vone);
      const float64x2_t term = vdivq_f64(vmulq_f64(vtwo, vld1q_f64(row + j)), safe);
      acc = vaddq_f64(acc, vbslq_f64(keep, term, vdupq_n_f64(0.0)));
    }
    for (; j < n; ++j) {
      const double denom = eigenvalues[i] + eigenvalues[j];
      if (denom > cutoff) tail += 2.0 * row[j] / denom;
    }
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1) + tail;
}

}  // namespace spinsense::kernels::neon
