// Fundamental system of u'' - q(x) u + mu^2 u = 0 on [0, pi].
//
// c(x,mu) and s(x,mu) are the solutions with c(0)=s'(0)=1, c'(0)=s(0)=0;
// they satisfy c s' - c' s = 1 identically, which is the module's primary
// numerical gate.  Integration is a fixed-step classical RK4 sweep over the
// potential grid.  Half-step potential values come from 4-point cubic
// interpolation: an averaged midpoint is only O(h^2) accurate and drags the
// whole scheme down to second order, while the cubic keeps the nominal
// fourth order for q in C^4.  Endpoint values can be Richardson-extrapolated
// from an h vs h/2 pair on request.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "degensl/types.hpp"

namespace degensl {

/// c, c', s, s' along the grid for one spectral parameter mu (lambda = mu^2).
struct SolutionRecord {
  cplx mu;
  std::vector<cplx> c, c_prime, s, s_prime;

  int n_points() const { return int(c.size()); }
};

struct EndpointValues {
  cplx c_pi, c_prime_pi, s_pi, s_prime_pi;
};

namespace detail {

inline constexpr double kOverflowGuard = 1e150;

// One RK4 step of the paired first-order system for (c, c', s, s').
// w0 = q(x) - mu^2, wm = q(x+h/2) - mu^2, w1 = q(x+h) - mu^2.
inline void rk4_step(std::array<cplx, 4>& y, double h, cplx w0, cplx wm, cplx w1) {
  const cplx c0 = y[0], cp0 = y[1], s0 = y[2], sp0 = y[3];

  // k1
  const cplx k1c = cp0, k1cp = w0 * c0;
  const cplx k1s = sp0, k1sp = w0 * s0;
  // k2
  cplx c1 = c0 + 0.5 * h * k1c, cp1 = cp0 + 0.5 * h * k1cp;
  cplx s1 = s0 + 0.5 * h * k1s, sp1 = sp0 + 0.5 * h * k1sp;
  const cplx k2c = cp1, k2cp = wm * c1;
  const cplx k2s = sp1, k2sp = wm * s1;
  // k3
  c1 = c0 + 0.5 * h * k2c;
  cp1 = cp0 + 0.5 * h * k2cp;
  s1 = s0 + 0.5 * h * k2s;
  sp1 = sp0 + 0.5 * h * k2sp;
  const cplx k3c = cp1, k3cp = wm * c1;
  const cplx k3s = sp1, k3sp = wm * s1;
  // k4
  c1 = c0 + h * k3c;
  cp1 = cp0 + h * k3cp;
  s1 = s0 + h * k3s;
  sp1 = sp0 + h * k3sp;
  const cplx k4c = cp1, k4cp = w1 * c1;
  const cplx k4s = sp1, k4sp = w1 * s1;

  const double w6 = h / 6.0;
  y[0] = c0 + w6 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
  y[1] = cp0 + w6 * (k1cp + 2.0 * k2cp + 2.0 * k3cp + k4cp);
  y[2] = s0 + w6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
  y[3] = sp0 + w6 * (k1sp + 2.0 * k2sp + 2.0 * k3sp + k4sp);
}

inline bool state_ok(const std::array<cplx, 4>& y) {
  for (const cplx& v : y) {
    const double a = std::abs(v.real()) + std::abs(v.imag());
    if (!(a < kOverflowGuard)) return false;
  }
  return true;
}

// q(x_i + h/2) by cubic interpolation through the four nearest nodes.
inline cplx midpoint_value(const std::vector<cplx>& q, int i) {
  const int n = int(q.size());
  if (n < 4) return 0.5 * (q[i] + q[i + 1]);
  if (i == 0) return (5.0 * q[0] + 15.0 * q[1] - 5.0 * q[2] + q[3]) / 16.0;
  if (i >= n - 2) return (q[n - 4] - 5.0 * q[n - 3] + 15.0 * q[n - 2] + 5.0 * q[n - 1]) / 16.0;
  return (-q[i - 1] + 9.0 * q[i] + 9.0 * q[i + 1] - q[i + 2]) / 16.0;
}

}  // namespace detail

/// Integrate the fundamental system across the full grid.
inline SolutionRecord solve_fundamental(const PotentialGrid& q, cplx mu) {
  q.validate();
  if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag()))
    throw error(errc::validation, "solve_fundamental: mu must be finite");

  const int n = q.n_points;
  const double h = q.h();
  const cplx mu2 = mu * mu;

  SolutionRecord rec;
  rec.mu = mu;
  rec.c.resize(n);
  rec.c_prime.resize(n);
  rec.s.resize(n);
  rec.s_prime.resize(n);

  std::array<cplx, 4> y = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)};
  rec.c[0] = y[0];
  rec.c_prime[0] = y[1];
  rec.s[0] = y[2];
  rec.s_prime[0] = y[3];

  for (int i = 0; i + 1 < n; ++i) {
    const cplx w0 = q.values[i] - mu2;
    const cplx w1 = q.values[i + 1] - mu2;
    const cplx wm = detail::midpoint_value(q.values, i) - mu2;
    detail::rk4_step(y, h, w0, wm, w1);
    if (!detail::state_ok(y))
      throw error(errc::integration_overflow,
                  "solve_fundamental: state magnitude exceeded 1e150 at grid index " +
                      std::to_string(i + 1));
    rec.c[i + 1] = y[0];
    rec.c_prime[i + 1] = y[1];
    rec.s[i + 1] = y[2];
    rec.s_prime[i + 1] = y[3];
  }
  return rec;
}

/// Endpoint extraction feeding every determinant.
inline EndpointValues eval_at_pi(const SolutionRecord& rec) {
  if (rec.c.empty()) throw error(errc::validation, "eval_at_pi: empty record");
  return {rec.c.back(), rec.c_prime.back(), rec.s.back(), rec.s_prime.back()};
}

/// max_i |c s' - c' s - 1| over the grid.
inline double wronskian_defect(const SolutionRecord& rec) {
  double worst = 0;
  for (int i = 0; i < rec.n_points(); ++i) {
    const cplx w = rec.c[i] * rec.s_prime[i] - rec.c_prime[i] * rec.s[i] - 1.0;
    worst = std::max(worst, std::abs(w));
  }
  return worst;
}

/// Potential refined to twice the resolution, new midpoints by the same
/// cubic rule the integrator uses for half-steps.
inline PotentialGrid refine_grid(const PotentialGrid& q) {
  const int n = q.n_points;
  std::vector<cplx> v(2 * n - 1);
  for (int i = 0; i < n; ++i) v[2 * i] = q.values[i];
  for (int i = 0; i + 1 < n; ++i) v[2 * i + 1] = detail::midpoint_value(q.values, i);
  return PotentialGrid(2 * n - 1, std::move(v));
}

/// Endpoint values from an integration of the fundamental system only
/// (no stored trajectory) -- cheaper inner loop for determinant sweeps.
inline EndpointValues endpoints_only(const PotentialGrid& q, cplx mu) {
  q.validate();
  const int n = q.n_points;
  const double h = q.h();
  const cplx mu2 = mu * mu;
  std::array<cplx, 4> y = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)};
  for (int i = 0; i + 1 < n; ++i) {
    const cplx w0 = q.values[i] - mu2;
    const cplx w1 = q.values[i + 1] - mu2;
    const cplx wm = detail::midpoint_value(q.values, i) - mu2;
    detail::rk4_step(y, h, w0, wm, w1);
    if (!detail::state_ok(y))
      throw error(errc::integration_overflow,
                  "endpoints_only: state magnitude exceeded 1e150 at grid index " +
                      std::to_string(i + 1));
  }
  return {y[0], y[1], y[2], y[3]};
}

struct RichardsonEndpoints {
  EndpointValues base;          // step h
  EndpointValues fine;          // step h/2
  EndpointValues extrapolated;  // (16*fine - base)/15
  double estimate;              // max-norm Richardson error estimate of `fine`
};

/// h vs h/2 endpoint pair with 4th-order Richardson extrapolation.
inline RichardsonEndpoints endpoints_richardson(const PotentialGrid& q, cplx mu) {
  const EndpointValues a = endpoints_only(q, mu);
  const EndpointValues b = endpoints_only(refine_grid(q), mu);
  auto mix = [](cplx va, cplx vb) { return (16.0 * vb - va) / 15.0; };
  RichardsonEndpoints r;
  r.base = a;
  r.fine = b;
  r.extrapolated = {mix(a.c_pi, b.c_pi), mix(a.c_prime_pi, b.c_prime_pi), mix(a.s_pi, b.s_pi),
                    mix(a.s_prime_pi, b.s_prime_pi)};
  r.estimate = std::max({std::abs(b.c_pi - a.c_pi), std::abs(b.c_prime_pi - a.c_prime_pi),
                         std::abs(b.s_pi - a.s_pi), std::abs(b.s_prime_pi - a.s_prime_pi)}) /
               15.0;
  return r;
}

namespace detail {

// Node derivatives of a grid function by 5-point 4th-order stencils.
inline std::vector<cplx> derivative_4th(const std::vector<cplx>& f, double h) {
  const int n = int(f.size());
  if (n < 5) throw error(errc::validation, "derivative_4th: need at least 5 nodes");
  std::vector<cplx> d(n);
  const double ih = 1.0 / (12.0 * h);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * ih;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * ih;
  for (int i = 2; i + 2 < n; ++i)
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * ih;
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * ih;
  d[n - 1] =
      (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * ih;
  return d;
}

// Cumulative integral of a grid function, 4th order: composite trapezoid with
// the -h^2/12 (f'_m - f'_0) end correction at every node, f' from 4th-order
// finite differences.
inline std::vector<cplx> cumulative_integral_4th(const std::vector<cplx>& f, double h) {
  const int n = int(f.size());
  const std::vector<cplx> d = derivative_4th(f, h);
  std::vector<cplx> I(n);
  I[0] = 0.0;
  cplx acc = 0.0;
  const double corr = h * h / 12.0;
  for (int i = 1; i < n; ++i) {
    acc += 0.5 * h * (f[i - 1] + f[i]);
    I[i] = acc - corr * (d[i] - d[0]);
  }
  return I;
}

}  // namespace detail

/// Particular solution of u'' - q u + mu^2 u = rhs with u(0) = u'(0) = 0,
/// by variation of parameters over (c, s).
inline std::vector<cplx> solve_inhomogeneous(const PotentialGrid& q, cplx mu,
                                             const std::vector<cplx>& rhs) {
  if (int(rhs.size()) != q.n_points)
    throw error(errc::validation, "solve_inhomogeneous: rhs not aligned with grid");
  const SolutionRecord rec = solve_fundamental(q, mu);
  const int n = q.n_points;
  const double h = q.h();
  std::vector<cplx> cr(n), sr(n);
  for (int i = 0; i < n; ++i) {
    cr[i] = rec.c[i] * rhs[i];
    sr[i] = rec.s[i] * rhs[i];
  }
  const std::vector<cplx> Ic = detail::cumulative_integral_4th(cr, h);
  const std::vector<cplx> Is = detail::cumulative_integral_4th(sr, h);
  std::vector<cplx> u(n);
  for (int i = 0; i < n; ++i) u[i] = rec.s[i] * Ic[i] - rec.c[i] * Is[i];
  return u;
}

}  // namespace degensl
