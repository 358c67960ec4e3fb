#include "spinsense/kernels.hpp"

namespace spinsense::kernels::scalar {

void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double next = decay * x[i] + kick * normals[i];
    phase[i] = phase[i] + half_dt * (x[i] + next);
    x[i] = next;
  }
}

double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff) {
  const std::size_t n = eigenvalues.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double denom = eigenvalues[i] + eigenvalues[j];
      if (denom > cutoff) total += 2.0 * mag2[i * n + j] / denom;
    }
  }
  return total;
}

}  // namespace spinsense::kernels::scalar
