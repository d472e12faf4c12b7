// Forward-solver verification of a reconstruction: compares the
// characteristic determinant of q_hat against the target on a check grid,
// the Dirichlet zeros of s_hat(pi, .) against the construction nodes, and
// c_hat(pi, mu_n) against the chosen roots c_n.
#pragma once

#include <cmath>
#include <vector>

#include "degensl/auxspectrum.hpp"
#include "degensl/glkernel.hpp"
#include "degensl/target.hpp"
#include "degensl/zeros.hpp"

namespace degensl {

struct ResidualEntry {
  double mu;
  cplx delta_hat;
  cplx v;
  double abs_residual;
};

struct MatchEntry {
  int n;
  double mismatch;
};

struct ReconstructionReport {
  PotentialGrid q_hat;
  std::vector<ResidualEntry> residual_table;
  std::vector<MatchEntry> dirichlet_match;  // |mu_hat_n - mu_n|
  std::vector<MatchEntry> c_match;          // |c_hat(pi, mu_n) - c_n|
  std::vector<MatchEntry> unit_product;     // |c_hat(pi,mu_n) s_hat'(pi,mu_n) - 1|
  std::vector<double> cond_samples;
  double probe_norm = 0;
  double tail_bound = 0;
  double min_re_w = 0;

  double max_residual() const {
    double m = 0;
    for (const auto& r : residual_table) m = std::max(m, r.abs_residual);
    return m;
  }
  double max_dirichlet_mismatch() const {
    double m = 0;
    for (const auto& e : dirichlet_match) m = std::max(m, e.mismatch);
    return m;
  }
  double max_c_mismatch() const {
    double m = 0;
    for (const auto& e : c_match) m = std::max(m, e.mismatch);
    return m;
  }
};

/// Quarter-integer check grid on (0, M), dodging integers and the
/// construction nodes where both determinants vanish.
inline std::vector<double> make_check_grid(const AuxSpectrum& aux) {
  std::vector<double> grid;
  const int M = aux.count();
  for (int k = 1; k <= 4 * M - 1; ++k) {
    const double mu = 0.25 * k;
    if (std::abs(mu - std::round(mu)) < 0.1) continue;
    bool near_node = false;
    for (double mn : aux.mu_seq)
      if (std::abs(mu - mn) < 0.1) {
        near_node = true;
        break;
      }
    if (!near_node) grid.push_back(mu);
  }
  return grid;
}

/// Run the forward modules against the construction data.
inline ReconstructionReport verify_reconstruction(const TargetDeterminant& t,
                                                  const AuxSpectrum& aux,
                                                  const PotentialGrid& q_hat) {
  ReconstructionReport rep;
  rep.q_hat = q_hat;
  rep.min_re_w = 1e300;
  for (const cplx& w : aux.w_seq) rep.min_re_w = std::min(rep.min_re_w, w.real());

  for (double mu : make_check_grid(aux)) {
    const cplx dh = char_det(q_hat, cplx(mu, 0.0), DetAccuracy::richardson);
    const cplx v = eval_v(t, cplx(mu, 0.0));
    rep.residual_table.push_back({mu, dh, v, std::abs(dh - v)});
  }

  const int n_check = std::min(aux.N + 8, aux.count());
  for (int n = 1; n <= n_check; ++n) {
    const double mu_n = aux.mu_seq[n - 1];
    const SpectralPoint z =
        refine_zero(DetKind::dirichlet, q_hat, BoundaryTheta(0), cplx(mu_n, 0.0), 1e-11);
    rep.dirichlet_match.push_back({n, std::abs(z.mu - cplx(mu_n, 0.0))});

    const EndpointValues e = endpoints_richardson(q_hat, cplx(mu_n, 0.0)).extrapolated;
    rep.c_match.push_back({n, std::abs(e.c_pi - aux.c_seq[n - 1])});
    rep.unit_product.push_back({n, std::abs(e.c_pi * e.s_prime_pi - 1.0)});
  }
  return rep;
}

}  // namespace degensl
