#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinsense {

template <std::size_t N>
SimplexOptimum<N> nelder_mead_minimize(const std::function<double(const std::array<double, N>&)>& f,
                                       const std::array<double, N>& start, double step, double xtol, double ftol,
                                       int max_iterations) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = f(pts[i]);

  auto blend = [](const Point& a, const Point& b, double t) {
    Point r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  int it = 0;
  std::array<std::size_t, N + 1> order;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[N - 1];

    double spread = 0.0;
    for (std::size_t v = 0; v <= N; ++v) {
      for (std::size_t i = 0; i < N; ++i) spread = std::max(spread, std::abs(pts[v][i] - pts[best][i]));
    }
    if (spread <= xtol && std::abs(vals[worst] - vals[best]) <= ftol) break;

    Point centroid{};
    for (std::size_t v = 0; v <= N; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < N; ++i) centroid[i] += pts[v][i] / static_cast<double>(N);
    }
    const Point reflected = blend(centroid, pts[worst], -1.0);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Point expanded = blend(centroid, pts[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Point contracted = outside ? blend(centroid, reflected, 0.5) : blend(centroid, pts[worst], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 0; v <= N; ++v) {
      if (v == best) continue;
      pts[v] = blend(pts[best], pts[v], 0.5);
      vals[v] = f(pts[v]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], it};
}

}  // namespace spinsense
