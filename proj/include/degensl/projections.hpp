// Residue-based spectral projections and completeness diagnostics.
//
// P_n(x, xi) = -(1/2 pi i) Int G(x, xi, lambda) dlambda over a circle in the
// lambda plane enclosing exactly one eigenvalue; its trace recovers the
// algebraic multiplicity and its L2 -> L2 norm is the quantity whose growth
// destroys the basis property.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "degensl/green.hpp"
#include "degensl/zeros.hpp"

namespace degensl {

struct ProjectionKernel {
  SpectralPoint center;
  Grid grid;
  std::vector<cplx> values;  // row-major P(x_i, xi_j)
  double contour_radius = 0;

  cplx at(int i, int j) const { return values[std::size_t(i) * grid.n_points + j]; }
};

namespace detail {

inline std::vector<double> trap_weights_full(const Grid& g) {
  std::vector<double> w(g.n_points, g.h());
  w.front() = w.back() = 0.5 * g.h();
  return w;
}

// P with m contour points; also reports the winding of Delta along the
// contour (phase tracking) and the minimal |Delta| encountered.
inline ProjectionKernel contour_projection(const PotentialGrid& q, BoundaryTheta theta,
                                           const SpectralPoint& point, double radius, int n_eval,
                                           int m_points, int& winding_out, double& min_det_out) {
  ProjectionKernel p;
  p.center = point;
  p.grid = Grid(n_eval);
  p.contour_radius = radius;
  p.values.assign(std::size_t(n_eval) * n_eval, cplx(0, 0));

  double prev_arg = 0, total_arg = 0;
  min_det_out = 1e300;
  for (int j = 0; j < m_points; ++j) {
    const double phi = 2.0 * kPi * j / m_points;
    const cplx lam = point.lambda + radius * cplx(std::cos(phi), std::sin(phi));
    const cplx mu = std::sqrt(lam);  // principal branch; G is even in mu
    const GreenSample gs = green_function(q, theta, mu, n_eval);

    const cplx det = char_det(q, mu, DetAccuracy::richardson);
    min_det_out = std::min(min_det_out, std::abs(det));
    const double a = std::arg(det);
    if (j > 0) {
      double d = a - prev_arg;
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      total_arg += d;
    }
    prev_arg = a;

    const cplx weight = -(radius / double(m_points)) * cplx(std::cos(phi), std::sin(phi));
    for (std::size_t k = 0; k < p.values.size(); ++k) p.values[k] += weight * gs.values[k];
  }
  // close the loop
  {
    const cplx det0 = char_det(q, std::sqrt(point.lambda + cplx(radius, 0)),
                               DetAccuracy::richardson);
    double d = std::arg(det0) - prev_arg;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    total_arg += d;
  }
  // each mu-plane zero appears once along the lambda contour; Delta is even,
  // so the total phase counts the enclosed algebraic multiplicity
  winding_out = int(std::lround(total_arg / (2.0 * kPi)));
  return p;
}

}  // namespace detail

/// Quadrature trace Int P(x, x) dx, which equals the algebraic multiplicity.
inline cplx projection_trace(const ProjectionKernel& p) {
  const std::vector<double> w = detail::trap_weights_full(p.grid);
  cplx tr = 0;
  for (int i = 0; i < p.grid.n_points; ++i) tr += w[i] * p.at(i, i);
  return tr;
}

/// Kernel of the composition (P o Q)(x, xi) = Int P(x, s) Q(s, xi) ds.
inline ProjectionKernel compose(const ProjectionKernel& a, const ProjectionKernel& b) {
  if (a.grid.n_points != b.grid.n_points)
    throw error(errc::validation, "compose: grids differ");
  const int n = a.grid.n_points;
  const std::vector<double> w = detail::trap_weights_full(a.grid);
  Eigen::MatrixXcd A(n, n), B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = a.at(i, j) * w[j];
      B(i, j) = b.at(i, j);
    }
  const Eigen::MatrixXcd C = A * B;
  ProjectionKernel out;
  out.center = a.center;
  out.grid = a.grid;
  out.contour_radius = a.contour_radius;
  out.values.resize(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.values[std::size_t(i) * n + j] = C(i, j);
  return out;
}

/// Singular values of the h-weighted kernel (descending).
inline std::vector<double> kernel_singular_values(const ProjectionKernel& p) {
  const int n = p.grid.n_points;
  const std::vector<double> w = detail::trap_weights_full(p.grid);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      A(i, j) = std::sqrt(w[i]) * p.at(i, j) * std::sqrt(w[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.adjoint() * A);
  std::vector<double> sv(n);
  for (int i = 0; i < n; ++i) sv[i] = std::sqrt(std::max(0.0, es.eigenvalues()(n - 1 - i)));
  return sv;
}

/// L2(0,pi) -> L2(0,pi) operator norm of the integral operator with kernel P.
inline double projection_norm(const ProjectionKernel& p) {
  return kernel_singular_values(p).front();
}

/// Numerical rank at the 1e-6 * sigma_max floor.
inline int projection_rank(const ProjectionKernel& p) {
  const std::vector<double> sv = kernel_singular_values(p);
  const double floor = 1e-6 * sv.front();
  int r = 0;
  for (double s : sv)
    if (s > floor) ++r;
  return r;
}

/// P = -(1/2 pi i) contour integral of G around one eigenvalue.  The radius
/// shrinks (and the point count doubles) until a doubling of contour points
/// moves the kernel by less than 1e-6.
inline ProjectionKernel spectral_projection(const PotentialGrid& q, BoundaryTheta theta,
                                            const SpectralPoint& point, double radius,
                                            int n_eval = 257, int m_points = 256) {
  if (!(radius > 0)) throw error(errc::validation, "spectral_projection: radius must be > 0");
  double r = radius;
  for (int attempt = 0; attempt < 4; ++attempt) {
    int wind = 0, wind2 = 0;
    double min_det = 0, min_det2 = 0;
    ProjectionKernel p1, p2;
    try {
      p1 = detail::contour_projection(q, theta, point, r, n_eval, m_points, wind, min_det);
      p2 = detail::contour_projection(q, theta, point, r, n_eval, 2 * m_points, wind2, min_det2);
    } catch (const error& e) {
      if (e.code() == errc::boundary_too_close && attempt + 1 < 4) {
        r *= 0.5;  // contour grazed an eigenvalue
        continue;
      }
      throw;
    }
    if (wind2 != point.multiplicity)
      throw error(errc::validation,
                  "spectral_projection: contour encloses winding " + std::to_string(wind2) +
                      ", expected multiplicity " + std::to_string(point.multiplicity) +
                      " (enclosure count != 1?)");
    double diff = 0, scale = 0;
    for (std::size_t k = 0; k < p1.values.size(); ++k) {
      diff = std::max(diff, std::abs(p1.values[k] - p2.values[k]));
      scale = std::max(scale, std::abs(p2.values[k]));
    }
    if (diff < 1e-6 * std::max(1.0, scale)) return p2;
    r *= 0.5;
  }
  throw error(errc::no_convergence,
              "spectral_projection: contour quadrature did not settle after radius shrinks");
}

// ---------------------------------------------------------------------------
// Completeness heuristic
// ---------------------------------------------------------------------------

enum class CompletenessVerdict { likely_complete, likely_incomplete, inconclusive };

struct CompletenessReport {
  double defect_eps = 0;    // max_{x in [0, eps]} |q(x) - q(pi - x)|
  double defect_total = 0;  // same over [0, pi]
  // per-derivative-order endpoint comparisons, k = 0..4
  std::vector<double> mismatch_plus;   // |q^(k)(0) - q^(k)(pi)|
  std::vector<double> mismatch_minus;  // |q^(k)(0) + q^(k)(pi)|
  int first_k_plus = -1;               // smallest k with plus-mismatch above tolerance
  int first_k_minus = -1;
  CompletenessVerdict verdict = CompletenessVerdict::inconclusive;
};

inline const char* verdict_name(CompletenessVerdict v) {
  switch (v) {
    case CompletenessVerdict::likely_complete: return "likely-complete";
    case CompletenessVerdict::likely_incomplete: return "likely-incomplete";
    default: return "inconclusive";
  }
}

namespace detail {

// endpoint derivatives q^(k)(x0), k = 0..4, by a degree-6 fit through the
// seven nodes nearest the endpoint
inline std::vector<cplx> endpoint_derivatives(const PotentialGrid& q, bool left) {
  const int deg = 6, pts = 7;
  const double h = q.h();
  Eigen::MatrixXcd V(pts, deg + 1);
  Eigen::VectorXcd rhs(pts);
  for (int r = 0; r < pts; ++r) {
    const int idx = left ? r : q.n_points - 1 - r;
    const double t = left ? double(r) : -double(r);  // (x - x0)/h
    double p = 1;
    for (int c = 0; c <= deg; ++c) {
      V(r, c) = p;
      p *= t;
    }
    rhs(r) = q.values[idx];
  }
  const Eigen::VectorXcd coef = V.colPivHouseholderQr().solve(rhs.eval());
  std::vector<cplx> d(5);
  double fact = 1;
  for (int k = 0; k <= 4; ++k) {
    if (k > 0) fact *= k;
    d[k] = coef(k) * fact / std::pow(h, k);
  }
  return d;
}

}  // namespace detail

/// Symmetry / endpoint-derivative diagnostics for the completeness and
/// non-completeness criteria of the degenerate problem.
inline CompletenessReport completeness_heuristic(const PotentialGrid& q, BoundaryTheta /*theta*/,
                                                 double epsilon) {
  q.validate();
  if (!(epsilon > 0) || epsilon > kPi / 2)
    throw error(errc::validation, "completeness_heuristic: need 0 < epsilon <= pi/2");
  CompletenessReport rep;
  const int n = q.n_points;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(q.values[i] - q.values[n - 1 - i]);
    rep.defect_total = std::max(rep.defect_total, d);
    if (q.x(i) <= epsilon) rep.defect_eps = std::max(rep.defect_eps, d);
  }

  const std::vector<cplx> d0 = detail::endpoint_derivatives(q, true);
  const std::vector<cplx> dpi = detail::endpoint_derivatives(q, false);
  rep.mismatch_plus.resize(5);
  rep.mismatch_minus.resize(5);
  for (int k = 0; k <= 4; ++k) {
    rep.mismatch_plus[k] = std::abs(d0[k] - dpi[k]);
    rep.mismatch_minus[k] = std::abs(d0[k] + dpi[k]);
    const double tol_k = 1e-6 + 1e-3 * (std::abs(d0[k]) + std::abs(dpi[k]));
    if (rep.first_k_plus < 0 && rep.mismatch_plus[k] > tol_k) rep.first_k_plus = k;
    if (rep.first_k_minus < 0 && rep.mismatch_minus[k] > tol_k) rep.first_k_minus = k;
  }

  const double sym_tol = 1e-8 * (1.0 + q.max_norm());
  if (rep.defect_eps <= sym_tol) {
    rep.verdict = CompletenessVerdict::likely_incomplete;
  } else if (rep.first_k_plus >= 0 && rep.first_k_minus >= 0) {
    rep.verdict = CompletenessVerdict::likely_complete;
  } else {
    rep.verdict = CompletenessVerdict::inconclusive;
  }
  return rep;
}

}  // namespace degensl
