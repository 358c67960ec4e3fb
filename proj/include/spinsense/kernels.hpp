#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants
// (AVX2 on x86-64, NEON on AArch64). The variant is picked once at runtime
// from the CPU features; tests force each available variant and compare it
// against the scalar reference.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace spinsense::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// True when this build contains kernels for `isa` and the CPU can run them.
bool isa_available(Isa isa);

/// The ISA used by the dispatching entry points below.
Isa active_isa();

/// Force an ISA (tests, benchmarks). Unavailable ISAs fall back to scalar.
/// std::nullopt restores auto-detection.
void set_isa_override(std::optional<Isa> isa);

/// One exact-discretization Ornstein-Uhlenbeck step over a batch of
/// independent paths, with trapezoidal accumulation of the integrated phase:
///
///     x'     = decay * x + kick * normal
///     phase += half_dt * (x + x')
///
/// All spans have the same length. Results are bit-identical across ISAs
/// (no fused multiply-add, element-wise only).
void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt);

/// Symmetric-logarithmic-derivative sum over an eigenbasis:
///
///     sum_{i,j : p_i + p_j > cutoff} 2 * mag2[i*n + j] / (p_i + p_j)
///
/// `mag2` is the row-major n x n matrix of |<i|drho|j>|^2. SIMD variants
/// reorder the summation, so agreement with scalar is to rounding only.
double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff);

namespace scalar {
void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt);
double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff);
}  // namespace scalar

namespace avx2 {
void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt);
double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff);
}  // namespace avx2

namespace neon {
void ou_advance(std::span<double> x, std::span<double> phase, std::span<const double> normals,
                double decay, double kick, double half_dt);
double sld_weighted_sum(std::span<const double> eigenvalues, std::span<const double> mag2,
                        double cutoff);
}  // namespace neon

}  // namespace spinsense::kernels
