#pragma once

#include <cmath>
#include <cstddef>

namespace casimir {

struct Extremum {
  double x;
  double value;
  std::size_t iterations;
};

/// Golden-section search for the maximum of a unimodal f on [a, b]; stops
/// when the bracket is narrower than `x_tolerance`.
template <class F>
Extremum golden_section_maximize(F&& f, double a, double b, double x_tolerance,
                                 std::size_t max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t it = 0;
  for (; it < max_iterations && std::abs(b - a) > x_tolerance; ++it) {
    if (fc > fd) {
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
  return fc > fd ? Extremum{c, fc, it} : Extremum{d, fd, it};
}

}  // namespace casimir
