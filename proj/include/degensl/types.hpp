// Core value types shared by all degensl modules: the uniform grid on
// [0, pi], complex potentials sampled on it, and the error taxonomy.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace degensl {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class errc {
  validation,            // bad inputs, malformed files
  integration_overflow,  // ODE state escaped the overflow guard
  degenerate_determinant,
  boundary_too_close,
  no_convergence,
  target_too_large,
  construction_violation,
  ill_conditioned,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::validation: return "validation";
    case errc::integration_overflow: return "integration-overflow";
    case errc::degenerate_determinant: return "degenerate-determinant";
    case errc::boundary_too_close: return "boundary-too-close";
    case errc::no_convergence: return "no-convergence";
    case errc::target_too_large: return "target-too-large";
    case errc::construction_violation: return "construction-violation";
    case errc::ill_conditioned: return "ill-conditioned";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Grid and potential
// ---------------------------------------------------------------------------

/// Uniform grid x_i = i*pi/(n_points-1) on [0, pi].
struct Grid {
  int n_points = 0;

  explicit Grid(int n = 0) : n_points(n) {}
  double h() const { return kPi / (n_points - 1); }
  double x(int i) const { return double(i) * kPi / (n_points - 1); }
  bool valid() const { return n_points >= 9; }
};

/// Complex-valued potential q(x_i) sampled on a uniform grid over [0, pi].
struct PotentialGrid {
  int n_points = 0;
  std::vector<cplx> values;

  PotentialGrid() = default;
  PotentialGrid(int n, std::vector<cplx> v) : n_points(n), values(std::move(v)) {}

  Grid grid() const { return Grid(n_points); }
  double h() const { return grid().h(); }
  double x(int i) const { return grid().x(i); }

  void validate() const {
    if (n_points < 9)
      throw error(errc::validation, "PotentialGrid: n_points must be >= 9");
    if (int(values.size()) != n_points)
      throw error(errc::validation, "PotentialGrid: values size does not match n_points");
    for (const cplx& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw error(errc::validation, "PotentialGrid: non-finite entry");
  }

  /// L1 norm of q over [0, pi] by composite trapezoid.
  double l1_norm() const {
    const double hh = h();
    double s = 0.5 * (std::abs(values.front()) + std::abs(values.back()));
    for (int i = 1; i + 1 < n_points; ++i) s += std::abs(values[i]);
    return s * hh;
  }

  double max_norm() const {
    double m = 0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

inline PotentialGrid sample_potential(int n_points, const std::function<cplx(double)>& q) {
  Grid g(n_points);
  std::vector<cplx> vals(n_points);
  for (int i = 0; i < n_points; ++i) vals[i] = q(g.x(i));
  return PotentialGrid(n_points, std::move(vals));
}

// The small corpus of named potentials used across tests and by the CLI.
namespace corpus {

inline PotentialGrid zero(int n) {
  return PotentialGrid(n, std::vector<cplx>(n, cplx(0.0, 0.0)));
}

inline PotentialGrid linear(int n) {
  return sample_potential(n, [](double x) { return cplx(x, 0.0); });
}

inline PotentialGrid cos2x(int n) {
  return sample_potential(n, [](double x) { return cplx(std::cos(2.0 * x), 0.0); });
}

// Smooth bump centered off pi/2, so q(x) != q(pi - x).
inline PotentialGrid asym_bump(int n) {
  return sample_potential(n, [](double x) {
    return cplx(1.5 * std::exp(-8.0 * (x - 1.0) * (x - 1.0)), 0.0);
  });
}

inline PotentialGrid complex_mix(int n) {
  return sample_potential(n, [](double x) { return cplx(x, std::sin(x)); });
}

}  // namespace corpus

// Resample (x, q) pairs onto a uniform grid by linear interpolation.
// Samples must cover [0, pi]; they are sorted by x on entry.
inline PotentialGrid resample_linear(int n_points, std::vector<std::pair<double, cplx>> samples) {
  if (samples.size() < 2)
    throw error(errc::validation, "potential samples: need at least 2 points");
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (samples.front().first > 1e-9 || samples.back().first < kPi - 1e-9)
    throw error(errc::validation, "potential samples: must cover [0, pi]");
  Grid g(n_points);
  std::vector<cplx> vals(n_points);
  std::size_t k = 0;
  for (int i = 0; i < n_points; ++i) {
    const double x = std::min(g.x(i), samples.back().first);
    while (k + 2 < samples.size() && samples[k + 1].first < x) ++k;
    const double x0 = samples[k].first, x1 = samples[k + 1].first;
    const double t = (x1 > x0) ? (x - x0) / (x1 - x0) : 0.0;
    vals[i] = samples[k].second * (1.0 - t) + samples[k + 1].second * t;
  }
  return PotentialGrid(n_points, std::move(vals));
}

}  // namespace degensl
