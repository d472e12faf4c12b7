// Complex zero localization for entire characteristic determinants.
//
// Winding numbers come from trapezoid quadrature of det'/det along rectangle
// boundaries (det' by central differences), with adaptive edge subdivision
// until the integral sits within 0.25 of an integer.  Rectangles are bisected
// along their longer side until each holds winding <= 2, then zeros are
// Newton-polished and multiplicities re-measured on a small circle.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "degensl/determinants.hpp"
#include "degensl/types.hpp"

namespace degensl {

/// A determinant zero in the mu plane with its winding multiplicity.
struct SpectralPoint {
  cplx mu;           // canonical representative, Re mu >= 0
  cplx lambda;       // mu^2 exactly
  int multiplicity;  // local winding number, >= 1
};

struct SearchRegion {
  double re_min, re_max, im_min, im_max;
  double refine_tol = 1e-9;

  void validate() const {
    if (!(re_min < re_max) || !(im_min < im_max))
      throw error(errc::validation, "SearchRegion: empty rectangle");
    if (!(refine_tol > 0)) throw error(errc::validation, "SearchRegion: refine_tol <= 0");
  }
  cplx corner(int k) const {  // counterclockwise from bottom-left
    switch (k & 3) {
      case 0: return {re_min, im_min};
      case 1: return {re_max, im_min};
      case 2: return {re_max, im_max};
      default: return {re_min, im_max};
    }
  }
};

namespace detail {

// Memoizing determinant evaluator; winding refinement halves segments, so
// repeated nodes are common.
class DetCache {
public:
  DetCache(DetKind kind, const PotentialGrid& q, DetAccuracy acc)
      : kind_(kind), q_(q), acc_(acc) {}

  cplx operator()(cplx mu) {
    const auto key = std::make_pair(mu.real(), mu.imag());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const cplx v = eval_det(kind_, q_, mu, acc_);
    cache_.emplace(key, v);
    return v;
  }

  // log-derivative det'/det with central differences, step 1e-5*(1+|mu|)
  cplx log_derivative(cplx mu) {
    const double step = 1e-5 * (1.0 + std::abs(mu));
    const cplx d = ((*this)(mu + step) - (*this)(mu - step)) / (2.0 * step);
    const cplx f = (*this)(mu);
    return d / f;
  }

  std::size_t evals() const { return cache_.size(); }

private:
  DetKind kind_;
  const PotentialGrid& q_;
  DetAccuracy acc_;
  std::map<std::pair<double, double>, cplx> cache_;
};

// Trapezoid of det'/det along the straight segment [a, b] with m panels.
inline cplx segment_integral(DetCache& det, cplx a, cplx b, int m) {
  const cplx dz = (b - a) / double(m);
  cplx sum = 0.5 * (det.log_derivative(a) + det.log_derivative(b));
  for (int j = 1; j < m; ++j) sum += det.log_derivative(a + double(j) * dz);
  return sum * dz;
}

struct WindingResult {
  int winding = 0;
  double defect = 0;  // |integral/(2 pi i) - winding|
  double boundary_min_abs = 0;
  double boundary_max_abs = 0;
};

// Closed-contour winding over a polyline (last vertex joins the first).
inline WindingResult winding_polyline(DetCache& det, const std::vector<cplx>& verts,
                                      int m_start, int m_max) {
  WindingResult out;
  double bmin = 1e300, bmax = 0;
  for (const cplx& v : verts) {
    const double a = std::abs(det(v));
    bmin = std::min(bmin, a);
    bmax = std::max(bmax, a);
  }
  int m = m_start;
  while (true) {
    cplx total = 0;
    for (std::size_t k = 0; k < verts.size(); ++k)
      total += segment_integral(det, verts[k], verts[(k + 1) % verts.size()], m);
    const cplx wc = total / cplx(0.0, 2.0 * kPi);
    const double snap = std::round(wc.real());
    const double defect = std::abs(wc.real() - snap) + std::abs(wc.imag());
    if (defect <= 0.25) {
      // confirming refinement: accept only if the snapped integer is stable
      cplx total2 = 0;
      for (std::size_t k = 0; k < verts.size(); ++k)
        total2 += segment_integral(det, verts[k], verts[(k + 1) % verts.size()], 2 * m);
      const cplx wc2 = total2 / cplx(0.0, 2.0 * kPi);
      const double defect2 = std::abs(wc2.real() - std::round(wc2.real())) + std::abs(wc2.imag());
      if (std::round(wc2.real()) == snap && defect2 <= 0.25) {
        out.winding = int(snap);
        out.defect = defect2;
        out.boundary_min_abs = bmin;
        out.boundary_max_abs = bmax;
        return out;
      }
    }
    if (m >= m_max)
      throw error(errc::boundary_too_close,
                  "winding: quadrature failed to settle near an integer; "
                  "a zero likely sits on or near the contour");
    m *= 2;
  }
}

inline WindingResult winding_rectangle(DetCache& det, const SearchRegion& r, int m_start = 16,
                                       int m_max = 8192) {
  std::vector<cplx> verts = {r.corner(0), r.corner(1), r.corner(2), r.corner(3)};
  return winding_polyline(det, verts, m_start, m_max);
}

inline WindingResult winding_circle(DetCache& det, cplx center, double radius, int m_start = 32,
                                    int m_max = 4096) {
  const int nv = 8;
  std::vector<cplx> verts(nv);
  for (int k = 0; k < nv; ++k) {
    const double phi = 2.0 * kPi * k / nv;
    verts[k] = center + radius * cplx(std::cos(phi), std::sin(phi));
  }
  // polygonal contour is fine: winding of det along it matches the circle
  // as long as zeros stay strictly inside/outside, which the caller ensures
  return winding_polyline(det, verts, m_start, m_max);
}

}  // namespace detail

/// Newton polish of a zero seed.  Plain Newton converges quadratically on
/// simple zeros and linearly (rate (m-1)/m) on multiple ones; the
/// multiplicity is re-measured afterwards on a small circle, falling back to
/// `multiplicity_hint` when the determinant sits at rounding level there.
inline SpectralPoint refine_zero(DetKind kind, const PotentialGrid& q, BoundaryTheta /*theta*/,
                                 cplx seed, double refine_tol = 1e-9, int multiplicity_hint = 1,
                                 int max_iter = 80, double mult_radius_cap = 1e-3) {
  detail::DetCache det(kind, q, DetAccuracy::richardson);
  cplx mu = seed;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const double step = 1e-5 * (1.0 + std::abs(mu));
    const cplx f = det(mu);
    const cplx d = (det(mu + step) - det(mu - step)) / (2.0 * step);
    if (std::abs(d) == 0.0) break;
    const cplx delta = f / d;
    mu -= delta;
    if (std::abs(delta) < 0.5 * refine_tol * (1.0 + std::abs(mu))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    // accept anyway if the residual is at rounding level for this det
    const double step = 1e-5 * (1.0 + std::abs(mu));
    const cplx d = (det(mu + step) - det(mu - step)) / (2.0 * step);
    if (!(std::abs(det(mu)) <= refine_tol * std::max(1.0, std::abs(d))))
      throw error(errc::no_convergence,
                  "refine_zero: Newton did not converge; last iterate (" +
                      std::to_string(mu.real()) + ", " + std::to_string(mu.imag()) + ")");
  }

  // re-measure multiplicity on a small circle around the polished zero
  int mult = multiplicity_hint;
  const double r_lo = std::max(10.0 * refine_tol, 64.0 * 1e-16 * (1.0 + std::abs(mu)));
  for (double r = std::max(r_lo, 1e-6 * (1.0 + std::abs(mu))); r <= mult_radius_cap;
       r *= 10.0) {
    try {
      const auto w = detail::winding_circle(det, mu, r);
      if (w.winding >= 1) {
        mult = w.winding;
        break;
      }
    } catch (const error&) {
      // det at rounding level on this circle; widen and retry
    }
  }

  SpectralPoint p;
  p.mu = (mu.real() < 0) ? -mu : mu;  // determinants are even in mu
  p.lambda = p.mu * p.mu;
  p.multiplicity = std::max(1, mult);
  return p;
}

/// All zeros of the chosen determinant inside the region, with winding
/// multiplicities.  Throws degenerate-determinant if the boundary maximum of
/// |det| sits below the degenerate floor, and boundary-too-close if a zero
/// hugs the region boundary.
inline std::vector<SpectralPoint> find_zeros(DetKind kind, const PotentialGrid& q,
                                             BoundaryTheta theta, const SearchRegion& region) {
  region.validate();
  detail::DetCache det(kind, q, DetAccuracy::base);

  // degenerate screen: sample the outer boundary
  {
    const double floor = degenerate_floor(q);
    double mx = 0;
    const int ns = 64;
    for (int e = 0; e < 4; ++e) {
      const cplx a = region.corner(e), b = region.corner(e + 1);
      for (int j = 0; j <= ns; ++j) mx = std::max(mx, std::abs(det(a + (b - a) * (double(j) / ns))));
    }
    if (mx < floor)
      throw error(errc::degenerate_determinant,
                  "find_zeros: determinant is below the degenerate floor on the whole "
                  "boundary (identically-zero determinant)");
  }

  const auto total = detail::winding_rectangle(det, region);
  std::vector<SpectralPoint> found;

  struct Box {
    SearchRegion r;
    int winding;
  };
  std::vector<Box> stack;
  stack.push_back({region, total.winding});

  const double min_side = std::max(64.0 * region.refine_tol, 1e-10);

  while (!stack.empty()) {
    Box box = stack.back();
    stack.pop_back();
    if (box.winding == 0) continue;

    const double w = box.r.re_max - box.r.re_min;
    const double hgt = box.r.im_max - box.r.im_min;

    const bool tiny = std::max(w, hgt) < min_side;
    if (box.winding <= 2 || tiny) {
      const cplx center(0.5 * (box.r.re_min + box.r.re_max), 0.5 * (box.r.im_min + box.r.im_max));
      bool accepted = false;
      try {
        SpectralPoint p = refine_zero(kind, q, theta, center, box.r.refine_tol, box.winding, 80,
                                      std::max(min_side, std::min(w, hgt) / 3.0));
        const double margin = 2.0 * box.r.refine_tol;
        auto inside = [&](cplx z) {
          return z.real() >= box.r.re_min - margin && z.real() <= box.r.re_max + margin &&
                 z.imag() >= box.r.im_min - margin && z.imag() <= box.r.im_max + margin;
        };
        // refine_zero canonicalizes to Re >= 0; test both representatives
        if (inside(p.mu) || inside(-p.mu)) {
          // a winding-2 box may hold two simple zeros; if the polished point
          // does not carry the full multiplicity, split the box instead
          if (p.multiplicity >= box.winding || tiny) {
            p.multiplicity = box.winding;  // boundary count is authoritative
            found.push_back(p);
            accepted = true;
          }
        }
      } catch (const error&) {
        if (tiny) throw;  // cannot subdivide further
      }
      if (accepted) continue;
      if (tiny)
        throw error(errc::no_convergence, "find_zeros: unresolvable cluster at minimum box size");
    }

    // bisect the longer side, dodging cuts that pass through or near a zero.
    // A cut exactly through a zero is treacherous: the two half-windings can
    // sum consistently (principal-value halves), so the line is screened by
    // sampling |det| along it before trusting the child windings.
    const bool vertical_cut = (w >= hgt);
    auto line_clear = [&](cplx a, cplx b) {
      // a zero on or hugging the line flips the phase of det by ~pi between
      // adjacent samples; away from zeros the phase creeps
      double prev_arg = 0;
      for (int j = 0; j <= 64; ++j) {
        const cplx v = det(a + (b - a) * (double(j) / 64.0));
        if (std::abs(v) == 0.0) return false;
        const double ar = std::arg(v);
        if (j > 0) {
          double d = ar - prev_arg;
          while (d > kPi) d -= 2.0 * kPi;
          while (d < -kPi) d += 2.0 * kPi;
          if (std::abs(d) > 0.5 * kPi) return false;
        }
        prev_arg = ar;
      }
      return true;
    };
    bool done = false;
    for (double offset : {0.5, 0.5 + 1.0 / 7.0, 0.5 - 1.0 / 7.0, 0.5 + 2.0 / 7.0}) {
      SearchRegion r1 = box.r, r2 = box.r;
      if (vertical_cut) {
        const double cut = box.r.re_min + offset * w;
        if (!line_clear(cplx(cut, box.r.im_min), cplx(cut, box.r.im_max))) continue;
        r1.re_max = cut;
        r2.re_min = cut;
      } else {
        const double cut = box.r.im_min + offset * hgt;
        if (!line_clear(cplx(box.r.re_min, cut), cplx(box.r.re_max, cut))) continue;
        r1.im_max = cut;
        r2.im_min = cut;
      }
      try {
        const auto w1 = detail::winding_rectangle(det, r1);
        const auto w2 = detail::winding_rectangle(det, r2);
        if (w1.winding + w2.winding != box.winding) continue;  // cut lost a zero
        stack.push_back({r1, w1.winding});
        stack.push_back({r2, w2.winding});
        done = true;
        break;
      } catch (const error& e) {
        if (e.code() != errc::boundary_too_close) throw;
        continue;  // zero on the trial cut; try the next offset
      }
    }
    if (!done)
      throw error(errc::boundary_too_close,
                  "find_zeros: could not find a subdividing cut free of zeros");
  }

  // merge duplicates (a double zero polished from two sibling boxes)
  std::sort(found.begin(), found.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
    return a.mu.imag() < b.mu.imag();
  });
  std::vector<SpectralPoint> zeros;
  for (const SpectralPoint& p : found) {
    if (!zeros.empty() && std::abs(zeros.back().mu - p.mu) < 4.0 * region.refine_tol)
      zeros.back().multiplicity += p.multiplicity;
    else
      zeros.push_back(p);
  }

  // boundary proximity guard on the polished zeros
  for (const SpectralPoint& p : zeros) {
    const double d_re =
        std::min(std::abs(p.mu.real() - region.re_min), std::abs(p.mu.real() - region.re_max));
    const double d_im =
        std::min(std::abs(p.mu.imag() - region.im_min), std::abs(p.mu.imag() - region.im_max));
    if (std::min(d_re, d_im) < region.refine_tol)
      throw error(errc::boundary_too_close,
                  "find_zeros: a zero lies within refine_tol of the region boundary");
  }

  int count = 0;
  for (const SpectralPoint& p : zeros) count += p.multiplicity;
  if (count != total.winding)
    throw error(errc::no_convergence,
                "find_zeros: zero multiplicities do not add up to the boundary winding");
  return zeros;
}

/// Winding number of the determinant around a rectangle (argument-principle
/// count of enclosed zeros).
inline int winding_count(DetKind kind, const PotentialGrid& q, const SearchRegion& region) {
  detail::DetCache det(kind, q, DetAccuracy::base);
  return detail::winding_rectangle(det, region).winding;
}

}  // namespace degensl
