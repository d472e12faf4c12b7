// Composite quadrature weights on index ranges of the uniform grid.
#pragma once

#include <vector>

#include "degensl/types.hpp"

namespace degensl::detail {

// Weights over nodes s = 0..i for the integral on [0, x_i].
// Simpson closes odd panel counts with the 3/8 rule; the trapezoid variant
// puts weight h/2 on both ends (including the diagonal point t = x).
inline std::vector<double> quad_weights_simpson(int i, double h) {
  std::vector<double> w(i + 1, h);
  if (i < 2) {
    w[0] = 0.5 * h;
    if (i == 0)
      w[0] = 0.0;
    else
      w[i] = 0.5 * h;
    return w;
  }
  const int simpson_end = (i % 2 == 0) ? i : i - 3;
  if (simpson_end >= 2) {
    w[0] = h / 3.0;
    for (int s = 1; s < simpson_end; ++s) w[s] = (s % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    w[simpson_end] = h / 3.0;
  }
  if (i % 2 == 1) {
    w[simpson_end] += 3.0 * h / 8.0;
    w[i - 2] = 9.0 * h / 8.0;
    w[i - 1] = 9.0 * h / 8.0;
    w[i] = 3.0 * h / 8.0;
    if (simpson_end == 0) w[0] = 3.0 * h / 8.0;
  }
  return w;
}

inline std::vector<double> quad_weights_trapezoid(int i, double h) {
  std::vector<double> w(i + 1, h);
  w[0] = 0.5 * h;
  w[i] = 0.5 * h;
  if (i == 0) w[0] = 0.0;
  return w;
}

}  // namespace degensl::detail
