// Built with -mavx2 on x86-64 only. Entered exclusively through the
// dispatcher after a CPUID check.

#include "spinsense/kernels.hpp"

#include <immintrin.h>

namespace spinsense::kernels::avx2 {

void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt) {
  const std::size_t n = x.size();
  const __m256d vdecay = _mm256_set1_pd(decay);
  const __m256d vkick = _mm256_set1_pd(kick);
  const __m256d vhalf = _mm256_set1_pd(half_dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x.data() + i);
    const __m256d ni = _mm256_loadu_pd(normals.data() + i);
    const __m256d next = _mm256_add_pd(_mm256_mul_pd(vdecay, xi), _mm256_mul_pd(vkick, ni));
    const __m256d ph = _mm256_loadu_pd(phase.data() + i);
    _mm256_storeu_pd(phase.data() + i, _mm256_add_pd(ph, _mm256_mul_pd(vhalf, _mm256_add_pd(xi, next))));
    _mm256_storeu_pd(x.data() + i, next);
  }
  // Leftovers
  for (; i < n; ++i) {
    const double next = decay * x[i] + kick * normals[i];
    phase[i] = phase[i] + half_dt * (x[i] + next);
    x[i] = next;
  }
}

double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff) {
  const std::size_t n = eigenvalues.size();
  const __m256d vcut = _mm256_set1_pd(cutoff);
  const __m256d vtwo = _mm256_set1_pd(2.0);
  const __m256d vone = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d pi = _mm256_set1_pd(eigenvalues[i]);
    const double* row = mag2.data() + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d denom = _mm256_add_pd(pi, _mm256_loadu_pd(eigenvalues.data() + j));
      const __m256d keep = _mm256_cmp_pd(denom, vcut, _CMP_GT_OQ);
      // Masked-out lanes divide by one and are then zeroed.
      const __m256d safe = _mm256_blendv_pd(vone, denom, keep);
      const __m256d term = _mm256_div_pd(_mm256_mul_pd(vtwo, _mm256_loadu_pd(row + j)), safe);
      acc = _mm256_add_pd(acc, _mm256_and_pd(term, keep));
    }
    for (; j < n; ++j) {
      const double denom = eigenvalues[i] + eigenvalues[j];
      if (denom > cutoff) tail += 2.0 * row[j] / denom;
    }
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail;
}

}  // namespace spinsense::kernels::avx2
