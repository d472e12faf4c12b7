// Green function of the degenerate boundary problem.
//
// G(x, xi, mu) = Phi_theta(x, xi, mu)/(2 Delta(mu)) + g(x, xi, mu), where
// Phi is assembled from the fundamental system and its endpoint values, and
// g = -sign(x - xi) (s(x)c(xi) - c(x)s(xi))/2 carries the delta jump.  With
// this sign the convention is (d^2/dx^2 - q + mu^2) Int G f dxi = -f and the
// jump of dG/dx across x = xi equals -1, i.e. G is the kernel of the
// resolvent (L - lambda)^{-1} for L = -d^2/dx^2 + q.  For theta = 1 the
// numerator is the theta = 0 one with x and xi exchanged.
#pragma once

#include <cmath>
#include <vector>

#include "degensl/determinants.hpp"
#include "degensl/ode.hpp"
#include "degensl/quadrature.hpp"
#include "degensl/types.hpp"

namespace degensl {

struct GreenSample {
  cplx mu;
  Grid grid;                 // evaluation grid (subsampled from the q grid)
  std::vector<cplx> values;  // row-major G(x_i, xi_j)

  cplx at(int i, int j) const { return values[std::size_t(i) * grid.n_points + j]; }
  double scale() const {
    double m = 0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

namespace detail {

// the combined-terms numerator (theta = 0 orientation)
inline cplx phi_combined(const EndpointValues& e, cplx cx, cplx sx, cplx cxi, cplx sxi) {
  const cplx C = e.c_pi, S = e.s_pi, Cp = e.c_prime_pi, Sp = e.s_prime_pi;
  return 2.0 * (sx * cxi - cx * sxi) - (C + Sp) * (sx * cxi + cx * sxi) +
         2.0 * (Cp * sx * sxi + S * cx * cxi);
}

// the raw four-bracket numerator, transcribed term by term
inline cplx phi_raw(const EndpointValues& e, cplx cx, cplx sx, cplx cxi, cplx sxi) {
  const cplx C = e.c_pi, S = e.s_pi, Cp = e.c_prime_pi, Sp = e.s_prime_pi;
  const cplx b1 = -cxi * S - sxi * (-1.0 - C);
  const cplx b2 = cxi * (-1.0 + Sp) - sxi * Cp;
  return sx * (Cp * b1 - (1.0 - C) * b2) - cx * ((1.0 + Sp) * b1 + S * b2);
}

}  // namespace detail

/// Sample the Green function on an (n_eval x n_eval) grid.  n_eval - 1 must
/// divide n_points - 1 so evaluation nodes sit on the potential grid.
inline GreenSample green_function(const PotentialGrid& q, BoundaryTheta theta, cplx mu,
                                  int n_eval) {
  q.validate();
  if (n_eval < 9 || (q.n_points - 1) % (n_eval - 1) != 0)
    throw error(errc::validation,
                "green_function: n_eval - 1 must divide n_points - 1 (and n_eval >= 9)");

  const cplx delta = char_det(q, mu, DetAccuracy::richardson);
  const double floor = degenerate_floor(q);
  if (std::abs(delta) < floor)
    throw error(errc::degenerate_determinant,
                "green_function: |Delta(mu)| below the degenerate floor (symmetric potential "
                "or mu at an eigenvalue)");
  if (std::abs(delta) < std::max(100.0 * floor, 1e-8 * (1.0 + std::abs(mu))))
    throw error(errc::boundary_too_close,
                "green_function: mu too close to an eigenvalue for a stable kernel");

  const SolutionRecord rec = solve_fundamental(q, mu);
  const EndpointValues e = eval_at_pi(rec);
  const int stride = (q.n_points - 1) / (n_eval - 1);

  GreenSample gs;
  gs.mu = mu;
  gs.grid = Grid(n_eval);
  gs.values.resize(std::size_t(n_eval) * n_eval);

  std::vector<cplx> c(n_eval), s(n_eval);
  for (int i = 0; i < n_eval; ++i) {
    c[i] = rec.c[std::size_t(i) * stride];
    s[i] = rec.s[std::size_t(i) * stride];
  }

  const cplx inv2d = 1.0 / (2.0 * delta);
  for (int i = 0; i < n_eval; ++i) {
    for (int j = 0; j < n_eval; ++j) {
      const cplx phi = (theta.theta == 0) ? detail::phi_combined(e, c[i], s[i], c[j], s[j])
                                          : detail::phi_combined(e, c[j], s[j], c[i], s[i]);
      const double sgn = (i > j) ? -1.0 : (i < j ? 1.0 : 0.0);
      const cplx g_part = 0.5 * sgn * (s[i] * c[j] - c[i] * s[j]);
      gs.values[std::size_t(i) * n_eval + j] = phi * inv2d + g_part;
    }
  }
  return gs;
}

namespace detail {

// endpoint-corrected trapezoid on a node segment (4th order, and the
// quadrature error varies smoothly with the segment length)
template <typename F>
cplx corrected_trapezoid(F&& val, int lo, int hi, double h) {
  const int m = hi - lo;
  if (m <= 0) return 0;
  cplx acc = 0.5 * (val(lo) + val(hi));
  for (int j = lo + 1; j < hi; ++j) acc += val(j);
  acc *= h;
  if (m >= 3) {
    const cplx d_lo =
        (-11.0 * val(lo) + 18.0 * val(lo + 1) - 9.0 * val(lo + 2) + 2.0 * val(lo + 3)) / (6.0 * h);
    const cplx d_hi =
        (11.0 * val(hi) - 18.0 * val(hi - 1) + 9.0 * val(hi - 2) - 2.0 * val(hi - 3)) / (6.0 * h);
    acc -= h * h / 12.0 * (d_hi - d_lo);
  }
  return acc;
}

}  // namespace detail

/// u(x_i) = Int_0^pi G(x_i, xi) f(xi) dxi.  The integrand has a derivative
/// kink at xi = x_i, so the quadrature is split at that node; each side uses
/// the endpoint-corrected trapezoid.
inline std::vector<cplx> green_apply(const GreenSample& gs, const std::vector<cplx>& f) {
  const int n = gs.grid.n_points;
  if (int(f.size()) != n) throw error(errc::validation, "green_apply: size mismatch");
  const double h = gs.grid.h();
  std::vector<cplx> u(n, cplx(0, 0));
  for (int i = 0; i < n; ++i) {
    auto val = [&](int j) { return gs.at(i, j) * f[j]; };
    u[i] = detail::corrected_trapezoid(val, 0, i, h) + detail::corrected_trapezoid(val, i, n - 1, h);
  }
  return u;
}

}  // namespace degensl
