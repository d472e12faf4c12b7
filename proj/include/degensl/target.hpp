// Admissible target determinants v(mu) = f(mu)/mu with f odd, entire of
// exponential type <= pi, and square-integrable on the real axis.
//
// f is represented through a finite sine series for its band-limited density
// g(t) = sum a_k sin(kt) on [0, pi], so that
//   f(mu) = Int_0^pi g(t) sin(mu t) dt = sum_k a_k (-1)^k sin(pi mu) k/(mu^2-k^2).
// Each term is evaluated through an exact sinc rewriting that is stable at
// the removable points mu = 0, +-k.
#pragma once

#include <cmath>
#include <vector>

#include "degensl/types.hpp"

namespace degensl {

namespace detail {

// sinc_pi(z) = sin(pi z)/(pi z); 6th-order series inside |z| < 0.05.
inline cplx sinc_pi(cplx z) {
  const cplx w = kPi * z;
  if (std::abs(w) < 0.05 * kPi) {
    const cplx w2 = w * w;
    return 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0));
  }
  return std::sin(w) / w;
}

// d/dz sinc_pi(z) = (cos(pi z) - sinc_pi(z)) / z, series near 0.
inline cplx dsinc_pi(cplx z) {
  const cplx w = kPi * z;
  if (std::abs(w) < 0.05 * kPi) {
    const cplx w2 = w * w;
    // -pi^2 z/3 * (1 - (pi z)^2/10 * (1 - 3 (pi z)^2 / 56 * ...))
    return -kPi * kPi * z / 3.0 * (1.0 - w2 / 10.0 + w2 * w2 / 280.0);
  }
  return (std::cos(w) - sinc_pi(z)) / z;
}

// value and mu-derivative of f_k(mu) = Int_0^pi sin(kt) sin(mu t) dt
inline void sine_overlap(int k, cplx mu, cplx& val, cplx& der) {
  const double dk = double(k);
  if (std::abs(mu - dk) < 0.5) {
    // f_k = pi k sinc_pi(mu-k)/(mu+k)
    const cplx den = mu + dk;
    const cplx S = sinc_pi(mu - dk), dS = dsinc_pi(mu - dk);
    val = kPi * dk * S / den;
    der = kPi * dk * (dS / den - S / (den * den));
    return;
  }
  if (std::abs(mu + dk) < 0.5) {
    // f_k = pi k sinc_pi(mu+k)/(mu-k)
    const cplx den = mu - dk;
    const cplx S = sinc_pi(mu + dk), dS = dsinc_pi(mu + dk);
    val = kPi * dk * S / den;
    der = kPi * dk * (dS / den - S / (den * den));
    return;
  }
  const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
  const cplx den = mu * mu - dk * dk;
  const cplx sn = std::sin(kPi * mu), cs = std::cos(kPi * mu);
  val = sgn * dk * sn / den;
  der = sgn * dk * (kPi * cs * den - 2.0 * mu * sn) / (den * den);
}

}  // namespace detail

/// v(mu) = f(mu)/mu built from a finite sine series density; `m` is the
/// smoothness index selecting the reported reconstruction class W_2^m, it
/// does not alter evaluation.
struct TargetDeterminant {
  std::vector<cplx> sine_coeffs;  // a_k, k = 1..K
  int m = 0;
  double scale = 1.0;

  void validate() const {
    if (sine_coeffs.empty())
      throw error(errc::validation, "TargetDeterminant: need at least one coefficient");
    if (m < 0) throw error(errc::validation, "TargetDeterminant: m must be >= 0");
    if (!(scale >= 0.0) || !std::isfinite(scale))
      throw error(errc::validation, "TargetDeterminant: scale must be finite and >= 0");
    for (const cplx& a : sine_coeffs)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw error(errc::validation, "TargetDeterminant: non-finite coefficient");
  }

  int band_limit() const { return int(sine_coeffs.size()); }

  bool is_zero() const {
    if (scale == 0.0) return true;
    for (const cplx& a : sine_coeffs)
      if (a != cplx(0.0, 0.0)) return false;
    return true;
  }
};

/// f(mu), entire, odd, exponential type <= pi.
inline cplx eval_f(const TargetDeterminant& t, cplx mu) {
  cplx sum = 0, val, der;
  for (int k = 1; k <= t.band_limit(); ++k) {
    detail::sine_overlap(k, mu, val, der);
    sum += t.sine_coeffs[k - 1] * val;
  }
  return t.scale * sum;
}

inline cplx eval_f_prime(const TargetDeterminant& t, cplx mu) {
  cplx sum = 0, val, der;
  for (int k = 1; k <= t.band_limit(); ++k) {
    detail::sine_overlap(k, mu, val, der);
    sum += t.sine_coeffs[k - 1] * der;
  }
  return t.scale * sum;
}

/// v(mu) = f(mu)/mu with v(0) = f'(0).
inline cplx eval_v(const TargetDeterminant& t, cplx mu) {
  if (std::abs(mu) < 0.5) {
    // per-term exact rewriting f_k/mu = (-1)^k pi k sinc_pi(mu)/(mu^2-k^2)
    cplx sum = 0;
    const cplx S = detail::sinc_pi(mu);
    for (int k = 1; k <= t.band_limit(); ++k) {
      const double dk = double(k);
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      sum += t.sine_coeffs[k - 1] * sgn * kPi * dk * S / (mu * mu - dk * dk);
    }
    return t.scale * sum;
  }
  return eval_f(t, mu) / mu;
}

struct SupBoundReport {
  bool pass = false;
  double max_abs_v = 0, max_abs_f = 0;
  cplx argmax_v, argmax_f;
  double tail_bound_f = 0;
};

/// Check |v| < 1/10 and |f| < 1 on the half-strip {|Im mu| <= 1, Re mu >= N}:
/// a 0.05-spaced grid over Re in [N, N+40] plus an analytic tail bound beyond.
inline SupBoundReport sup_bound_check(const TargetDeterminant& t, int N) {
  t.validate();
  if (N < 1) throw error(errc::validation, "sup_bound_check: N must be >= 1");
  SupBoundReport rep;

  const double step = 0.05;
  const int n_re = int(std::lround(40.0 / step));
  const int n_im = int(std::lround(2.0 / step));
  for (int i = 0; i <= n_re; ++i) {
    const double re = N + step * i;
    for (int j = 0; j <= n_im; ++j) {
      const double im = -1.0 + step * j;
      const cplx mu(re, im);
      const double av = std::abs(eval_v(t, mu));
      const double af = std::abs(eval_f(t, mu));
      if (av > rep.max_abs_v) {
        rep.max_abs_v = av;
        rep.argmax_v = mu;
      }
      if (af > rep.max_abs_f) {
        rep.max_abs_f = af;
        rep.argmax_f = mu;
      }
    }
  }

  // tail: Re mu > N + 40
  const int K = t.band_limit();
  double amax = 0;
  for (const cplx& a : t.sine_coeffs) amax = std::max(amax, std::abs(a));
  amax *= t.scale;
  const double re_tail = N + 40.0;
  const double denom = re_tail * re_tail - double(K) * double(K) - 1.0;
  rep.tail_bound_f = (denom > 0) ? amax * kPi * std::exp(kPi) * K / denom : 1e300;

  rep.pass = rep.max_abs_v < 0.1 && rep.max_abs_f < 1.0 && rep.tail_bound_f < 1.0 &&
             rep.tail_bound_f / re_tail < 0.1;
  return rep;
}

}  // namespace degensl
