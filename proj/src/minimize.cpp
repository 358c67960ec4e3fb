#include "spinsense/minimize.hpp"

#include <cmath>
#include <stdexcept>

namespace spinsense {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol,
                                      int max_iterations) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_maximize: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarOptimum{c, fc, it} : ScalarOptimum{d, fd, it};
}

}  // namespace spinsense
