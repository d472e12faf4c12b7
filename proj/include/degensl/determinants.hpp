// Characteristic determinants of the degenerate problem and of the
// Dirichlet problem.
//
// For the boundary pair u'(0) + (-1)^theta u'(pi) = 0,
// u(0) + (-1)^(theta+1) u(pi) = 0 the characteristic equation reduces to
// Delta(mu) = c(pi,mu) - s'(pi,mu) = 0 for either theta; the Dirichlet
// characteristic function is s(pi,mu).
#pragma once

#include "degensl/ode.hpp"
#include "degensl/types.hpp"

namespace degensl {

struct BoundaryTheta {
  int theta = 0;

  explicit BoundaryTheta(int t = 0) : theta(t) {
    if (t != 0 && t != 1) throw error(errc::validation, "theta must be 0 or 1");
  }
  double parity() const { return theta == 0 ? 1.0 : -1.0; }  // (-1)^theta
};

enum class DetKind { delta, dirichlet };

enum class DetAccuracy { base, richardson };

inline cplx det_from_endpoints(DetKind kind, const EndpointValues& e) {
  return kind == DetKind::delta ? e.c_pi - e.s_prime_pi : e.s_pi;
}

/// Delta(mu) = c(pi,mu) - s'(pi,mu).  Independent of theta.
inline cplx char_det(const PotentialGrid& q, cplx mu,
                     DetAccuracy acc = DetAccuracy::base) {
  if (acc == DetAccuracy::base)
    return det_from_endpoints(DetKind::delta, endpoints_only(q, mu));
  return det_from_endpoints(DetKind::delta, endpoints_richardson(q, mu).extrapolated);
}

/// Dirichlet characteristic function s(pi, mu).
inline cplx dirichlet_det(const PotentialGrid& q, cplx mu,
                          DetAccuracy acc = DetAccuracy::base) {
  if (acc == DetAccuracy::base)
    return det_from_endpoints(DetKind::dirichlet, endpoints_only(q, mu));
  return det_from_endpoints(DetKind::dirichlet, endpoints_richardson(q, mu).extrapolated);
}

inline cplx eval_det(DetKind kind, const PotentialGrid& q, cplx mu,
                     DetAccuracy acc = DetAccuracy::base) {
  return kind == DetKind::delta ? char_det(q, mu, acc) : dirichlet_det(q, mu, acc);
}

/// Below this boundary maximum the determinant is declared identically zero.
inline double degenerate_floor(const PotentialGrid& q) {
  return 1e-10 * (1.0 + q.l1_norm());
}

}  // namespace degensl
