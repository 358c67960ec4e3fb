#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace spinsense {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops when the bracket width is below `tol` (absolute).
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol,
                                      int max_iterations = 500);

template <std::size_t N>
struct SimplexOptimum {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
};

/// Nelder-Mead minimization with the standard coefficients (1, 2, 1/2, 1/2).
/// The initial simplex is `start` plus `step` along each axis. Stops when
/// every vertex is within `xtol` of the best one (max-norm) and the spread of
/// function values is below `ftol`.
template <std::size_t N>
SimplexOptimum<N> nelder_mead_minimize(const std::function<double(const std::array<double, N>&)>& f,
                                       const std::array<double, N>& start, double step, double xtol, double ftol,
                                       int max_iterations = 2000);

}  // namespace spinsense

#include "spinsense/minimize_impl.hpp"
