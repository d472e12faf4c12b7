// GMRES (modified Gram-Schmidt, no restart) for the second-kind systems in
// the GL solver.  The operator is supplied as a callable.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "degensl/types.hpp"

namespace degensl {

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0;
  bool converged = false;
};

namespace detail {

inline double norm2(const std::vector<cplx>& v) {
  double s = 0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace detail

/// Solve A x = b with x as the initial guess on entry, solution on exit.
/// Convergence is ||r|| <= rel_tol * max(||b||, scale); pass a problem-level
/// `scale` so that rows with (near-)vanishing right-hand sides terminate at
/// an absolute level instead of chasing 1e-13 * ||b|| ~ 0.
inline GmresResult gmres(const std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>& apply,
                         const std::vector<cplx>& b, std::vector<cplx>& x, double rel_tol,
                         int max_iter, double scale = 0.0) {
  const std::size_t n = b.size();
  GmresResult res;
  const double bnorm = detail::norm2(b);
  if (bnorm == 0.0 && scale <= 0.0) {
    x.assign(n, cplx(0, 0));
    res.converged = true;
    return res;
  }
  const double ref = std::max(bnorm, scale);

  std::vector<cplx> Ax(n);
  apply(x, Ax);
  std::vector<cplx> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ax[i];
  double beta = detail::norm2(r);
  if (beta <= rel_tol * ref) {
    res.converged = true;
    res.relative_residual = beta / ref;
    return res;
  }

  const int m = max_iter;
  std::vector<std::vector<cplx>> V;
  V.reserve(m + 1);
  {
    std::vector<cplx> v0(r);
    for (cplx& t : v0) t /= beta;
    V.push_back(std::move(v0));
  }
  // Hessenberg in factored (Givens) form
  std::vector<std::vector<cplx>> H;  // H[j] holds column j (j+2 entries)
  std::vector<cplx> cs(m), sn(m), g(m + 1, cplx(0, 0));
  g[0] = beta;

  int j = 0;
  for (; j < m; ++j) {
    std::vector<cplx> w(n);
    apply(V[j], w);
    const double wnorm0 = detail::norm2(w);
    std::vector<cplx> hj(j + 2, cplx(0, 0));
    for (int i = 0; i <= j; ++i) {
      hj[i] = detail::dot(V[i], w);
      for (std::size_t k = 0; k < n; ++k) w[k] -= hj[i] * V[i][k];
    }
    // one reorthogonalization pass when cancellation was severe (DGKS test)
    if (detail::norm2(w) < 0.7 * wnorm0) {
      for (int i = 0; i <= j; ++i) {
        const cplx corr = detail::dot(V[i], w);
        hj[i] += corr;
        for (std::size_t k = 0; k < n; ++k) w[k] -= corr * V[i][k];
      }
    }
    const double wnorm = detail::norm2(w);
    // rounding-level remainder: the Krylov space is (numerically) invariant
    const bool happy = wnorm <= 1e-14 * std::max(1.0, wnorm0);
    hj[j + 1] = happy ? 0.0 : wnorm;
    if (!happy) {
      std::vector<cplx> vj(w);
      for (cplx& t : vj) t /= wnorm;
      V.push_back(std::move(vj));
    }
    // apply the accumulated rotations, then form a new one
    for (int i = 0; i < j; ++i) {
      const cplx t = cs[i] * hj[i] + sn[i] * hj[i + 1];
      hj[i + 1] = -std::conj(sn[i]) * hj[i] + std::conj(cs[i]) * hj[i + 1];
      hj[i] = t;
    }
    const double denom = std::sqrt(std::norm(hj[j]) + std::norm(hj[j + 1]));
    if (denom == 0.0) {
      H.push_back(std::move(hj));
      ++j;
      break;
    }
    cs[j] = std::conj(hj[j]) / denom;
    sn[j] = std::conj(hj[j + 1]) / denom;
    hj[j] = cs[j] * hj[j] + sn[j] * hj[j + 1];
    hj[j + 1] = 0;
    const cplx gj = g[j];
    g[j] = cs[j] * gj;
    g[j + 1] = -std::conj(sn[j]) * gj;
    H.push_back(std::move(hj));
    if (happy || std::abs(g[j + 1]) <= rel_tol * ref) {
      ++j;
      break;
    }
  }

  // back substitution on the triangularized Hessenberg
  const int k = j;
  std::vector<cplx> y(k, cplx(0, 0));
  for (int i = k - 1; i >= 0; --i) {
    cplx s = g[i];
    for (int l = i + 1; l < k; ++l) s -= H[l][i] * y[l];
    y[i] = s / H[i][i];
  }
  for (int i = 0; i < k; ++i)
    for (std::size_t l = 0; l < n; ++l) x[l] += y[i] * V[i][l];

  apply(x, Ax);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ax[i];
  res.iterations = k;
  res.relative_residual = detail::norm2(r) / ref;
  res.converged = res.relative_residual <= 4.0 * rel_tol;
  return res;
}

}  // namespace degensl
