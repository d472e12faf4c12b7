// Auxiliary Dirichlet spectrum and norming data for the constructive
// inverse algorithm: the index N, the perturbed node sequence mu_n, the
// quadratic-root choices c_n and the weights w_n = c_n/(mu_n s'(mu_n)).
#pragma once

#include <cmath>
#include <vector>

#include "degensl/target.hpp"
#include "degensl/types.hpp"

namespace degensl {

/// Smallest N >= 2 for which the strip bounds |v| < 1/10, |f| < 1 hold on
/// {|Im mu| <= 1, Re mu >= N}.
inline int choose_N(const TargetDeterminant& t, int n_max = 256) {
  t.validate();
  for (int N = 2; N <= n_max; ++N)
    if (sup_bound_check(t, N).pass) return N;
  throw error(errc::target_too_large,
              "choose_N: no N <= " + std::to_string(n_max) +
                  " satisfies the strip bounds; reduce the target scale");
}

/// mu_n = N + 0.4 + 0.2 n/(N+1) for n <= N (inside the 1/10 window around
/// N + 1/2), mu_n = n beyond N.  Strictly increasing.
inline std::vector<double> build_mu_sequence(int N, int count) {
  if (N < 0 || count <= N)
    throw error(errc::validation, "build_mu_sequence: need count > N >= 0");
  std::vector<double> mu(count);
  for (int n = 1; n <= N; ++n) mu[n - 1] = N + 0.4 + 0.2 * double(n) / double(N + 1);
  for (int n = N + 1; n <= count; ++n) mu[n - 1] = double(n);
  return mu;
}

// ---------------------------------------------------------------------------
// s(mu) = (sin(pi mu)/mu) * prod_{k<=N} (mu_k^2 - mu^2)/(k^2 - mu^2)
// ---------------------------------------------------------------------------

/// Evaluates s and its mu-derivative anywhere in C, with the removable
/// points mu in {0, +-1, ..., +-N} handled by exact pairing of the sine zero
/// against the vanishing denominator factor.
class SFunction {
public:
  // Uses the first N entries of mu_seq (the perturbed nodes).
  SFunction(int N, std::vector<double> mu_seq) : N_(N), mu_(std::move(mu_seq)) {
    if (int(mu_.size()) < N_)
      throw error(errc::validation, "SFunction: mu_seq shorter than N");
    mu_.resize(N_);
  }

  int N() const { return N_; }

  struct ValueAndDerivative {
    cplx value, derivative;
  };

  ValueAndDerivative eval(cplx mu) const {
    // A(mu) = sin(pi mu) / (mu * prod_k (k^2 - mu^2)),  B(mu) = prod_k (mu_k^2 - mu^2)
    cplx A, dA;
    eval_entire_part(mu, A, dA);
    cplx B(1.0, 0.0), dB(0.0, 0.0);
    for (int k = 1; k <= N_; ++k) {
      const cplx fac = mu_[k - 1] * mu_[k - 1] - mu * mu;
      dB = dB * fac + B * (-2.0 * mu);
      B *= fac;
    }
    return {A * B, dA * B + A * dB};
  }

  cplx value(cplx mu) const { return eval(mu).value; }
  cplx derivative(cplx mu) const { return eval(mu).derivative; }

private:
  // A and A' with the zero of sin(pi mu) at the nearest m in {-N..N}
  // cancelled analytically against mu (m=0) or (m^2 - mu^2).
  void eval_entire_part(cplx mu, cplx& A, cplx& dA) const {
    const double mr = std::round(mu.real());
    const int m = int(std::abs(mr)) <= N_ ? int(mr) : 0;
    const bool near_removable = std::abs(mu - double(m)) < 0.25 && std::abs(double(m)) <= N_;

    if (near_removable && m == 0) {
      // A = pi sinc_pi(mu) / prod (k^2 - mu^2)
      cplx P(1.0, 0.0), dP(0.0, 0.0);
      for (int k = 1; k <= N_; ++k) {
        const cplx fac = double(k) * double(k) - mu * mu;
        dP = dP * fac + P * (-2.0 * mu);
        P *= fac;
      }
      const cplx S = detail::sinc_pi(mu), dS = detail::dsinc_pi(mu);
      A = kPi * S / P;
      dA = kPi * (dS * P - S * dP) / (P * P);
      return;
    }
    if (near_removable) {
      // sin(pi mu) = (-1)^m sin(pi(mu-m)); the k = |m| denominator factor
      // cancels, leaving sign * pi * sinc_pi(mu-m) / (mu (mu+m) prod_{k != |m|}).
      const int am = std::abs(m);
      const double sign = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m+1)
      cplx P(1.0, 0.0), dP(0.0, 0.0);
      for (int k = 1; k <= N_; ++k) {
        if (k == am) continue;
        const cplx fac = double(k) * double(k) - mu * mu;
        dP = dP * fac + P * (-2.0 * mu);
        P *= fac;
      }
      // den = mu (mu + m) P   (for m < 0 this is mu (mu - |m|) P)
      const cplx lin = mu + double(m);
      const cplx den = mu * lin * P;
      const cplx dden = lin * P + mu * P + mu * lin * dP;
      const cplx S = detail::sinc_pi(mu - double(m)), dS = detail::dsinc_pi(mu - double(m));
      A = sign * kPi * S / den;
      dA = sign * kPi * (dS * den - S * dden) / (den * den);
      return;
    }

    // direct quotient form
    cplx P(1.0, 0.0), dP(0.0, 0.0);
    for (int k = 1; k <= N_; ++k) {
      const cplx fac = double(k) * double(k) - mu * mu;
      dP = dP * fac + P * (-2.0 * mu);
      P *= fac;
    }
    const cplx den = mu * P;
    const cplx dden = P + mu * dP;
    const cplx sn = std::sin(kPi * mu), cs = kPi * std::cos(kPi * mu);
    A = sn / den;
    dA = (cs * den - sn * dden) / (den * den);
  }

  int N_;
  std::vector<double> mu_;
};

// ---------------------------------------------------------------------------
// Root selection and weights
// ---------------------------------------------------------------------------

/// Roots of z^2 - v(mu_n) z - 1 = 0, taking c_n in the disk around +1 for
/// even n and around -1 for odd n.  Requires the strip bounds to hold so the
/// two roots separate into those disks.
inline std::vector<cplx> select_roots(const TargetDeterminant& t,
                                      const std::vector<double>& mu_seq) {
  std::vector<cplx> c(mu_seq.size());
  for (std::size_t i = 0; i < mu_seq.size(); ++i) {
    const int n = int(i) + 1;
    const cplx u = eval_v(t, cplx(mu_seq[i], 0.0));
    const cplx root = std::sqrt(u * u + 4.0);  // principal branch, Re >= 0
    const double sigma = (n % 2 == 0) ? 1.0 : -1.0;
    c[i] = 0.5 * (u + sigma * root);
    const double center = sigma;
    if (std::abs(c[i] - center) >= 0.5)
      throw error(errc::construction_violation,
                  "select_roots: root escaped its disk at n = " + std::to_string(n) +
                      " (strip bound violated upstream)");
  }
  return c;
}

/// w_n = c_n / (mu_n s'(mu_n)); all must satisfy Re w_n > 0.
inline std::vector<cplx> build_w(const std::vector<double>& mu_seq, const std::vector<cplx>& c_seq,
                                 const SFunction& s) {
  if (mu_seq.size() != c_seq.size())
    throw error(errc::validation, "build_w: sequence size mismatch");
  std::vector<cplx> w(mu_seq.size());
  for (std::size_t i = 0; i < mu_seq.size(); ++i) {
    const cplx sdot = s.derivative(cplx(mu_seq[i], 0.0));
    if (std::abs(sdot) == 0.0)
      throw error(errc::construction_violation, "build_w: s'(mu_n) vanished");
    w[i] = c_seq[i] / (mu_seq[i] * sdot);
    if (!(w[i].real() > 0.0))
      throw error(errc::construction_violation,
                  "build_w: Re w_n <= 0 at n = " + std::to_string(i + 1) +
                      " (construction bound failed upstream)");
  }
  return w;
}

/// The assembled construction data.  For the identically-zero target the
/// pipeline uses the unperturbed sequence (N = 0, mu_n = n), for which every
/// kernel term cancels exactly.
struct AuxSpectrum {
  int N = 0;
  std::vector<double> mu_seq;
  std::vector<cplx> c_seq;
  std::vector<cplx> w_seq;

  int count() const { return int(mu_seq.size()); }

  void validate() const {
    const int M = count();
    if (int(c_seq.size()) != M || int(w_seq.size()) != M)
      throw error(errc::validation, "AuxSpectrum: ragged sequences");
    for (int i = 1; i < M; ++i)
      if (!(mu_seq[i] > mu_seq[i - 1]))
        throw error(errc::validation, "AuxSpectrum: mu_seq not strictly increasing");
    for (int n = 1; n <= std::min(N, M); ++n)
      if (!(std::abs(mu_seq[n - 1] - (N + 0.5)) < 0.1))
        throw error(errc::validation, "AuxSpectrum: perturbed node outside the 1/10 window");
    for (int n = 1; n <= M; ++n) {
      const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
      if (!(sgn * c_seq[n - 1].real() > 0.0))
        throw error(errc::validation, "AuxSpectrum: (-1)^n Re c_n <= 0");
      if (!(w_seq[n - 1].real() > 0.0))
        throw error(errc::validation, "AuxSpectrum: Re w_n <= 0");
    }
  }
};

/// Build the full data set for a target: N (0 for the zero target), nodes,
/// roots and weights, truncated at `count` entries.
inline AuxSpectrum make_aux_spectrum(const TargetDeterminant& t, int count) {
  t.validate();
  AuxSpectrum aux;
  aux.N = t.is_zero() ? 0 : choose_N(t);
  if (count <= aux.N)
    throw error(errc::validation, "make_aux_spectrum: count must exceed N");
  aux.mu_seq = build_mu_sequence(aux.N, count);
  aux.c_seq = select_roots(t, aux.mu_seq);
  const SFunction s(aux.N, aux.mu_seq);
  aux.w_seq = build_w(aux.mu_seq, aux.c_seq, s);
  aux.validate();
  return aux;
}

}  // namespace degensl
