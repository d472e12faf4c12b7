// Kernel assembly and solution of the Gelfand-Levitan equation
//
//   K(x,t) + F(x,t) + Int_0^x K(x,s) F(s,t) ds = 0,  0 <= t <= x <= pi,
//
// for the series kernel
//
//   F(x,t) = sum_n [ 2 w_n sin(mu_n x) sin(mu_n t) - (2/pi) sin(nx) sin(nt) ].
//
// F depends on x, t only through cos-series of x-t and x+t, so it is carried
// as a one-dimensional profile Omega on the grid of y = x +- t:
// F(x,t) = Omega(x-t) - Omega(x+t).  Terms n <= M use the constructed data
// (w_n, mu_n); beyond M the weights reduce to w_n = 1/(pi R_n) with the
// rational factor R_n fixed by the perturbed nodes, and those exactly-known
// terms are kept out to a horizon H >> M (below the grid Nyquist), with the
// dropped n > H mass reported as the tail bound.
//
// The discrete equation is a Nystrom system on the shared grid (composite
// Simpson by default, trapezoid with an h/2 diagonal weight as an option).
// Small systems go through a dense LU; large ones through GMRES with FFT
// Toeplitz/Hankel applies and warm starts along x.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "degensl/auxspectrum.hpp"
#include "degensl/fft.hpp"
#include "degensl/krylov.hpp"
#include "degensl/ode.hpp"
#include "degensl/quadrature.hpp"
#include "degensl/types.hpp"

namespace degensl {

enum class TailMode {
  extended,  // carry exact series terms out to a horizon H >> M (default)
  hard_cut   // truncate the series at M
};

enum class GlQuadrature {
  simpson,   // composite Simpson (3/8 closeout on odd rows); default
  trapezoid  // composite trapezoid, diagonal point at weight h/2
};

struct GlOptions {
  TailMode tail_mode = TailMode::extended;
  int tail_horizon = 0;      // 0: max(4M-1, 255), clamped below the grid Nyquist
  GlQuadrature quadrature = GlQuadrature::simpson;
  double gmres_tol = 1e-13;
  int gmres_max_iter = 300;
  int dense_threshold = 128;  // rows up to this size use a dense LU
  double cond_max = 1e8;
  bool store_full_kernel = true;
};

/// Discretized F (as the 1-D profile Omega) and the GL solution K on the
/// triangular grid.
struct KernelSet {
  Grid grid;
  int truncation_M = 0;
  int tail_horizon = 0;      // last series index carried in omega
  std::vector<cplx> omega;   // Omega(m h), m = 0 .. 2(n-1)
  double tail_bound = 0;     // reported remainder of the series cut

  std::vector<cplx> K_diag;              // K(x_i, x_i), filled by the solver
  std::vector<std::vector<cplx>> K_rows; // optional: row i holds K(x_i, t_j), j <= i
  std::vector<double> cond_samples;      // condition estimates at sampled x
  double probe_norm = 0;                 // homogeneous-solve norm at x = pi

  cplx F(int i, int j) const { return omega[std::abs(i - j)] - omega[i + j]; }
  bool has_K() const { return !K_diag.empty(); }
  cplx K(int i, int j) const { return K_rows[i][j]; }
};

namespace detail {

// d_k = mu_k^2 - k^2 for the perturbed nodes.
inline std::vector<double> node_shifts(const AuxSpectrum& aux) {
  std::vector<double> d(aux.N);
  for (int k = 1; k <= aux.N; ++k) d[k - 1] = aux.mu_seq[k - 1] * aux.mu_seq[k - 1] - double(k) * k;
  return d;
}

// 1/R_n - 1 with R_n = prod_k (mu_k^2 - n^2)/(k^2 - n^2), for n > N.
inline double rational_deviation(const std::vector<double>& d, int n) {
  double r = 1.0;
  const double n2 = double(n) * double(n);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double k2 = double(k + 1) * double(k + 1);
    r *= 1.0 - d[k] / (n2 - k2);
  }
  return 1.0 / r - 1.0;
}

}  // namespace detail

/// Assemble the kernel profile for the data set.  The target's band limit
/// must not exceed the data length (the tail assumes c_n = (-1)^n beyond M,
/// which needs f(n) = 0 there).
inline KernelSet assemble_F(const AuxSpectrum& aux, Grid grid, const TargetDeterminant& t,
                            const GlOptions& opt = {}) {
  aux.validate();
  if (!grid.valid()) throw error(errc::validation, "assemble_F: grid too small");
  const int M = aux.count();
  if (M <= aux.N) throw error(errc::validation, "assemble_F: truncation must exceed N");
  if (t.band_limit() > M)
    throw error(errc::validation,
                "assemble_F: target band limit exceeds truncation; increase truncation_M to at "
                "least " + std::to_string(t.band_limit()));

  KernelSet ks;
  ks.grid = grid;
  ks.truncation_M = M;
  const int n = grid.n_points;
  const int ny = 2 * (n - 1) + 1;
  const double h = grid.h();
  ks.omega.assign(ny, cplx(0, 0));

  // retained terms: w_n cos(mu_n y) - (1/pi) cos(n y), n = 1..M
  for (int m = 0; m < ny; ++m) {
    const double y = m * h;
    cplx acc = 0;
    for (int nn = 1; nn <= M; ++nn)
      acc += aux.w_seq[nn - 1] * std::cos(aux.mu_seq[nn - 1] * y) -
             (1.0 / kPi) * std::cos(double(nn) * y);
    ks.omega[m] = acc;
  }

  const std::vector<double> d = detail::node_shifts(aux);
  double A1 = 0;
  for (double dk : d) A1 += dk;

  // Horizon for the exactly-known remainder terms (w_n = 1/(pi R_n) beyond
  // the data, valid past the target band limit).  Kept below the grid
  // Nyquist so the assembled kernel stays resolvable.  The default scales
  // with the data length so the dropped-tail verification floor, which
  // behaves like 1/(H + 1/2), contracts by a full factor of two when the
  // run is doubled.
  const int nyquist_cap = std::max(M + 1, (n - 1) / 4);
  int H = opt.tail_horizon > 0 ? opt.tail_horizon : std::max(4 * M - 1, 255);
  H = std::max(M, std::min(H, nyquist_cap));
  ks.tail_horizon = (opt.tail_mode == TailMode::extended && aux.N > 0) ? H : M;

  if (opt.tail_mode == TailMode::extended && aux.N > 0 && H > M) {
    std::vector<double> eps(H - M);
    for (int nn = M + 1; nn <= H; ++nn) eps[nn - M - 1] = detail::rational_deviation(d, nn);
    for (int m = 0; m < ny; ++m) {
      const double y = m * h;
      const double cy = std::cos(y);
      // cos(n y) by three-term recurrence, starting from n = M
      double c_prev = std::cos((M - 1) * y), c_cur = std::cos(M * y);
      double expl = 0;
      for (int nn = M + 1; nn <= H; ++nn) {
        const double c_next = 2.0 * cy * c_cur - c_prev;
        c_prev = c_cur;
        c_cur = c_next;
        expl += eps[nn - M - 1] * c_cur;
      }
      ks.omega[m] += expl / kPi;
    }
  }

  // reported l1 mass of the dropped coefficients sum_{n>H} |2 w_n - 2/pi|
  if (aux.N == 0) {
    ks.tail_bound = 0.0;
  } else {
    const int cut = (opt.tail_mode == TailMode::extended) ? H : M;
    double tb = 0;
    for (int nn = cut + 1; nn <= cut + 64; ++nn)
      tb += std::abs(detail::rational_deviation(d, nn));
    tb += std::abs(A1) / double(cut + 64);  // integral bound past the explicit window
    ks.tail_bound = (2.0 / kPi) * tb;
  }
  return ks;
}

// ---------------------------------------------------------------------------
// Nystrom solve
// ---------------------------------------------------------------------------

namespace detail {

// Quadrature weights on [0, x_i] over nodes s = 0..i.
inline std::vector<double> quad_weights(GlQuadrature rule, int i, double h) {
  return rule == GlQuadrature::trapezoid ? quad_weights_trapezoid(i, h)
                                         : quad_weights_simpson(i, h);
}

// Dense (I + F W) on [0, x_i]; rows/cols j, s = 0..i.
inline Eigen::MatrixXcd dense_gl_matrix(const KernelSet& ks, int i,
                                        GlQuadrature rule = GlQuadrature::simpson) {
  const double h = ks.grid.h();
  const int m = i + 1;
  const std::vector<double> w = quad_weights(rule, i, h);
  Eigen::MatrixXcd A(m, m);
  for (int j = 0; j < m; ++j)
    for (int s = 0; s < m; ++s) {
      const cplx fw = ks.F(j, s) * w[s];
      A(j, s) = fw + (j == s ? cplx(1, 0) : cplx(0, 0));
    }
  return A;
}

// y = (I + F W) k restricted to [0, x_i], FFT-accelerated.
class GlApply {
public:
  GlApply(const KernelSet& ks, int bucket_n, GlQuadrature rule)
      : h_(ks.grid.h()), rule_(rule), conv_(ks.omega, bucket_n) {}

  void operator()(const std::vector<cplx>& k, std::vector<cplx>& out, int i) const {
    const int m = i + 1;
    if (i != cached_i_) {
      w_ = quad_weights(rule_, i, h_);
      cached_i_ = i;
    }
    wk_.assign(m, cplx(0, 0));
    for (int s = 0; s < m; ++s) wk_[s] = k[s] * w_[s];
    conv_.apply_toeplitz(wk_, m, t_);
    conv_.apply_hankel(wk_, m, hk_);
    out.assign(m, cplx(0, 0));
    for (int j = 0; j < m; ++j) out[j] = k[j] + (t_[j] - hk_[j]);
  }

private:
  double h_;
  GlQuadrature rule_;
  fft::SymbolConvolver conv_;
  mutable std::vector<cplx> wk_, t_, hk_;
  mutable std::vector<double> w_;
  mutable int cached_i_ = -1;
};

}  // namespace detail

/// Solve the GL systems row by row, filling K_diag (and optionally the full
/// triangular K).  Also records the homogeneous probe at x = pi and sampled
/// condition estimates.
inline void solve_gelfand_levitan(KernelSet& ks, const GlOptions& opt = {}) {
  const int n = ks.grid.n_points;
  ks.K_diag.assign(n, cplx(0, 0));
  if (opt.store_full_kernel) {
    ks.K_rows.assign(n, {});
    ks.K_rows[0] = {cplx(0, 0)};
  }
  ks.cond_samples.clear();

  // row 0: K(0,0) = -F(0,0) = 0
  ks.K_diag[0] = -ks.F(0, 0);

  std::vector<cplx> prev, prev2, k, b;
  double kernel_scale = 1.0;
  for (const cplx& w : ks.omega) kernel_scale = std::max(kernel_scale, std::abs(w));

  // bucketed FFT applies for the iterative rows
  std::vector<std::unique_ptr<detail::GlApply>> buckets;  // bucket p covers m <= 128*2^p
  auto bucket_for = [&](int m) -> detail::GlApply& {
    int p = 0, cap = opt.dense_threshold;
    while (cap < m) {
      cap *= 2;
      ++p;
    }
    while (int(buckets.size()) <= p) buckets.push_back(nullptr);
    if (!buckets[p]) {
      const int bn = std::min(n, opt.dense_threshold << p);
      buckets[p] = std::make_unique<detail::GlApply>(ks, bn, opt.quadrature);
    }
    return *buckets[p];
  };

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;  // reused for dense rows
  prev = {ks.K_diag[0]};

  for (int i = 1; i < n; ++i) {
    const int m = i + 1;
    b.assign(m, cplx(0, 0));
    for (int j = 0; j < m; ++j) b[j] = -ks.F(i, j);

    if (m <= opt.dense_threshold) {
      const Eigen::MatrixXcd A = detail::dense_gl_matrix(ks, i, opt.quadrature);
      Eigen::VectorXcd rhs(m);
      for (int j = 0; j < m; ++j) rhs(j) = b[j];
      lu.compute(A);
      const Eigen::VectorXcd sol = lu.solve(rhs);
      k.assign(m, cplx(0, 0));
      for (int j = 0; j < m; ++j) k[j] = sol(j);
    } else {
      // warm start: second-order continuation from the two previous rows
      k.assign(m, cplx(0, 0));
      for (int j = 0; j < int(prev.size()); ++j) k[j] = prev[j];
      if (int(prev2.size()) >= 2) {
        for (int j = 0; j < int(prev2.size()); ++j) k[j] = 2.0 * prev[j] - prev2[j];
        k[m - 2] = prev[m - 2];
      }
      k[m - 1] = prev[m - 2];
      detail::GlApply& ap = bucket_for(m);
      auto apply = [&](const std::vector<cplx>& v, std::vector<cplx>& out) { ap(v, out, i); };
      const GmresResult g = gmres(apply, b, k, opt.gmres_tol, opt.gmres_max_iter, kernel_scale);
      if (!g.converged)
        throw error(errc::ill_conditioned,
                    "solve_gelfand_levitan: GMRES stalled at x index " + std::to_string(i) +
                        " (relative residual " + std::to_string(g.relative_residual) + ")");
    }

    ks.K_diag[i] = k[i];
    if (opt.store_full_kernel) ks.K_rows[i] = k;
    prev2 = prev;
    prev = k;
  }

  // homogeneous probe at x = pi: solve (I + F W) g = 0
  {
    const int i = n - 1;
    std::vector<cplx> g(n, cplx(0, 0)), zero_rhs(n, cplx(0, 0));
    if (n <= opt.dense_threshold) {
      const Eigen::MatrixXcd A = detail::dense_gl_matrix(ks, i, opt.quadrature);
      Eigen::VectorXcd sol = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(
          Eigen::VectorXcd::Zero(n));
      double s = 0;
      for (int j = 0; j < n; ++j) s += std::norm(sol(j));
      ks.probe_norm = std::sqrt(s);
    } else {
      detail::GlApply& ap = bucket_for(n);
      auto apply = [&](const std::vector<cplx>& v, std::vector<cplx>& out) { ap(v, out, i); };
      gmres(apply, zero_rhs, g, opt.gmres_tol, opt.gmres_max_iter);
      double s = 0;
      for (const cplx& v : g) s += std::norm(v);
      ks.probe_norm = std::sqrt(s);
    }
  }

  // condition estimates at sampled rows: power iteration for ||A|| and a
  // solve against a fixed unit vector for a lower bound on ||A^{-1}||
  for (int frac = 1; frac <= 8; ++frac) {
    const int i = std::max(1, (n - 1) * frac / 8);
    const int m = i + 1;
    auto apply_any = [&](const std::vector<cplx>& v, std::vector<cplx>& out) {
      if (m <= opt.dense_threshold) {
        const Eigen::MatrixXcd A = detail::dense_gl_matrix(ks, i, opt.quadrature);
        Eigen::VectorXcd vv(m);
        for (int j = 0; j < m; ++j) vv(j) = v[j];
        const Eigen::VectorXcd r = A * vv;
        out.assign(m, cplx(0, 0));
        for (int j = 0; j < m; ++j) out[j] = r(j);
      } else {
        bucket_for(m)(v, out, i);
      }
    };
    std::vector<cplx> v(m), w;
    for (int j = 0; j < m; ++j) v[j] = cplx(std::cos(0.7 * j + 0.3), std::sin(1.3 * j));
    double nrm = detail::norm2(v);
    for (cplx& x : v) x /= nrm;
    double sigma_max = 1.0;
    for (int itp = 0; itp < 6; ++itp) {
      apply_any(v, w);
      sigma_max = detail::norm2(w);
      if (sigma_max == 0) break;
      for (int j = 0; j < m; ++j) v[j] = w[j] / sigma_max;
    }
    std::vector<cplx> e(m, cplx(0, 0)), z(m, cplx(0, 0));
    e[m / 2] = 1.0;
    gmres(apply_any, e, z, 1e-10, opt.gmres_max_iter);
    const double inv_bound = detail::norm2(z);
    const double cond = sigma_max * std::max(1.0, inv_bound);
    ks.cond_samples.push_back(cond);
    if (cond > opt.cond_max)
      throw error(errc::ill_conditioned,
                  "solve_gelfand_levitan: condition estimate " + std::to_string(cond) +
                      " exceeds cond_max");
  }
}

/// q_hat(x) = 2 d/dx K(x, x) by 4th-order stencils on the diagonal.
inline PotentialGrid extract_potential(const KernelSet& ks) {
  if (!ks.has_K()) throw error(errc::validation, "extract_potential: K not computed");
  const std::vector<cplx> d = detail::derivative_4th(ks.K_diag, ks.grid.h());
  std::vector<cplx> q(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) q[i] = 2.0 * d[i];
  return PotentialGrid(ks.grid.n_points, std::move(q));
}

}  // namespace degensl
