#include <catch2/catch.hpp>

#include "degensl/zeros.hpp"

using namespace degensl;

TEST_CASE("q = 0 makes Delta vanish identically") {
  const auto q = corpus::zero(1025);
  for (const cplx mu : {cplx(0.7, 0.0), cplx(2.3, 0.8), cplx(5.0, -1.0)})
    CHECK(std::abs(char_det(q, mu)) < 1e-10);
}

TEST_CASE("symmetric potentials annihilate Delta") {
  const auto q = corpus::cos2x(2049);
  CHECK(std::abs(char_det(q, cplx(0.7, 0.0), DetAccuracy::richardson)) < 1e-7);
  CHECK(std::abs(char_det(q, cplx(1.3, 0.4), DetAccuracy::richardson)) < 1e-7);
}

TEST_CASE("Delta for the linear potential: two grid resolutions agree") {
  const cplx d1 = char_det(corpus::linear(2049), cplx(1.0, 0.0));
  const cplx d2 = char_det(corpus::linear(4097), cplx(1.0, 0.0));
  CHECK(std::abs(d1) > 1e-2);  // nonzero
  CHECK(std::abs(d1 - d2) < 1e-8);
}

TEST_CASE("Dirichlet determinant closed forms for q = 0") {
  const auto q = corpus::zero(2049);
  for (int n : {1, 2, 4}) CHECK(std::abs(dirichlet_det(q, cplx(double(n), 0.0))) < 1e-10);
  CHECK(std::abs(dirichlet_det(q, cplx(0.5, 0.0)) - 2.0) < 1e-10);
}

TEST_CASE("Dirichlet bracket for the linear potential sits near sqrt(1+<q>)") {
  // bisection oracle on the real axis for the smallest positive zero
  const auto q = corpus::linear(1025);
  double lo = 0.5, hi = 2.0;
  auto f = [&](double mu) { return dirichlet_det(q, cplx(mu, 0.0)).real(); };
  REQUIRE(f(lo) * f(hi) < 0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
  }
  const double mu1 = 0.5 * (lo + hi);
  // <q> = pi/2 for q(x) = x; first zero near sqrt(1 + <q>) = sqrt(1 + pi/2)
  CHECK(std::abs(mu1 - std::sqrt(1.0 + kPi / 2.0)) < 0.1);
  // cross-check against refine_zero
  const SpectralPoint z = refine_zero(DetKind::dirichlet, q, BoundaryTheta(0), cplx(1.5, 0.0));
  CHECK(std::abs(z.mu.real() - mu1) < 1e-7);
}

TEST_CASE("find_zeros: free Dirichlet spectrum in a rectangle") {
  const auto q = corpus::zero(1025);
  const SearchRegion region{0.5, 4.5, -1.0, 1.0, 1e-9};
  const auto zeros = find_zeros(DetKind::dirichlet, q, BoundaryTheta(0), region);
  REQUIRE(zeros.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(zeros[k].mu - cplx(k + 1.0, 0.0)) < 1e-7);
    CHECK(zeros[k].multiplicity == 1);
    CHECK(zeros[k].lambda == zeros[k].mu * zeros[k].mu);
  }
  CHECK(winding_count(DetKind::dirichlet, q, region) == 4);
}

TEST_CASE("find_zeros rejects an identically-zero determinant") {
  const auto q = corpus::zero(513);
  const SearchRegion region{0.5, 4.5, -1.0, 1.0, 1e-9};
  try {
    find_zeros(DetKind::delta, q, BoundaryTheta(0), region);
    FAIL("expected degenerate_determinant");
  } catch (const error& e) {
    CHECK(e.code() == errc::degenerate_determinant);
  }
}

TEST_CASE("find_zeros for Delta of the linear potential vs a Newton-seed oracle") {
  const auto q = corpus::linear(1025);
  const SearchRegion region{0.0, 6.0, -2.0, 2.0, 1e-8};
  const auto zeros = find_zeros(DetKind::delta, q, BoundaryTheta(0), region);
  REQUIRE(!zeros.empty());

  // independent oracle: Newton from an 8x8 seed lattice, dedup, restrict to
  // the region interior
  std::vector<cplx> oracle;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const cplx seed(0.4 + a * 0.75, -1.8 + b * 0.5);
      cplx mu = seed;
      bool ok = true;
      for (int it = 0; it < 80; ++it) {
        const double st = 1e-6 * (1.0 + std::abs(mu));
        const cplx f = char_det(q, mu, DetAccuracy::richardson);
        const cplx d =
            (char_det(q, mu + st, DetAccuracy::richardson) -
             char_det(q, mu - st, DetAccuracy::richardson)) / (2.0 * st);
        if (std::abs(d) == 0) { ok = false; break; }
        const cplx delta = f / d;
        mu -= delta;
        if (std::abs(delta) < 1e-12 * (1 + std::abs(mu))) break;
        if (std::abs(mu) > 50) { ok = false; break; }
      }
      if (!ok) continue;
      if (mu.real() < 0) mu = -mu;
      if (mu.real() <= region.re_min + 1e-6 || mu.real() >= region.re_max - 1e-6) continue;
      if (mu.imag() <= region.im_min + 1e-6 || mu.imag() >= region.im_max - 1e-6) continue;
      bool dup = false;
      for (const cplx& z : oracle)
        if (std::abs(z - mu) < 1e-6) dup = true;
      if (!dup) oracle.push_back(mu);
    }

  REQUIRE(oracle.size() == zeros.size());
  for (const auto& z : zeros) {
    double best = 1e300;
    for (const cplx& o : oracle) best = std::min(best, std::abs(z.mu - o));
    CHECK(best < 1e-7);
  }
}

TEST_CASE("refine_zero: free Dirichlet seeds") {
  const auto q = corpus::zero(1025);
  const auto z1 = refine_zero(DetKind::dirichlet, q, BoundaryTheta(0), cplx(2.2, 0.0), 1e-10);
  CHECK(std::abs(z1.mu - cplx(2.0, 0.0)) < 1e-10);
  CHECK(z1.multiplicity == 1);
  const auto z2 = refine_zero(DetKind::dirichlet, q, BoundaryTheta(0), cplx(0.6, 0.3), 1e-9);
  CHECK(std::abs(z2.mu - cplx(1.0, 0.0)) < 1e-9);
}

TEST_CASE("refine_zero agrees with find_zeros output") {
  const auto q = corpus::linear(1025);
  const SearchRegion region{0.5, 4.0, -1.0, 1.0, 1e-9};
  const auto zeros = find_zeros(DetKind::delta, q, BoundaryTheta(0), region);
  for (const auto& z : zeros) {
    const auto r = refine_zero(DetKind::delta, q, BoundaryTheta(0), z.mu + cplx(3e-3, 1e-3));
    CHECK(std::abs(r.mu - z.mu) < 2e-9);
  }
}

TEST_CASE("refine_zero reports non-convergence away from any zero") {
  const auto q = corpus::zero(513);
  // Dirichlet det of q=0 is entire with zeros only at integers; a hopeless
  // seed far in the upper half plane diverges
  CHECK_THROWS_AS(
      refine_zero(DetKind::dirichlet, q, BoundaryTheta(0), cplx(0.5, 40.0), 1e-12, 1, 8), error);
}

TEST_CASE("determinants are even in mu") {
  const auto q = corpus::complex_mix(1025);
  for (const cplx mu : {cplx(1.3, 0.5), cplx(4.7, -0.2)}) {
    CHECK(std::abs(char_det(q, mu) - char_det(q, -mu)) < 1e-12);
    CHECK(std::abs(dirichlet_det(q, mu) - dirichlet_det(q, -mu)) < 1e-12);
  }
}

TEST_CASE("Paley-Wiener growth of mu Delta(mu) for the linear potential") {
  const auto q = corpus::linear(1025);
  // bounded on the real axis, square-summable sample norm
  double max_real = 0, l2 = 0;
  const double dmu = 0.5;
  for (double mu = 0.25; mu <= 60.0; mu += dmu) {
    const double v = std::abs(mu * char_det(q, cplx(mu, 0.0), DetAccuracy::richardson));
    max_real = std::max(max_real, v);
    l2 += v * v * dmu;
  }
  CHECK(std::isfinite(l2));
  CHECK(max_real < 50.0);
  // exponential-type bound on a vertical line sample
  const double C = 4.0 * std::max(max_real, 1.0);
  for (double im = 0.5; im <= 2.0; im += 0.5) {
    const cplx mu(7.3, im);
    const double v = std::abs(mu * char_det(q, mu, DetAccuracy::richardson));
    CHECK(v <= C * std::exp(kPi * im));
  }
}

TEST_CASE("argument-principle count is additive over a partition") {
  const auto q = corpus::linear(1025);
  const SearchRegion whole{0.2, 5.2, -1.1, 1.1, 1e-9};
  const int total = winding_count(DetKind::dirichlet, q, whole);
  int sum = 0;
  for (int k = 0; k < 4; ++k) {
    SearchRegion part = whole;
    part.re_min = whole.re_min + (whole.re_max - whole.re_min) * k / 4.0;
    part.re_max = whole.re_min + (whole.re_max - whole.re_min) * (k + 1) / 4.0;
    sum += winding_count(DetKind::dirichlet, q, part);
  }
  CHECK(sum == total);
}

TEST_CASE("Dirichlet zeros approach integers like 1/n for smooth q") {
  const auto q = corpus::asym_bump(2049);
  std::vector<double> mu_n(21, 0.0);
  for (int n = 1; n <= 20; ++n) {
    const auto z = refine_zero(DetKind::dirichlet, q, BoundaryTheta(0), cplx(double(n), 0.0));
    mu_n[n] = z.mu.real();
  }
  double C = 0;
  for (int n = 15; n <= 20; ++n) C = std::max(C, std::abs(mu_n[n] - n) * n);
  for (int n = 1; n <= 20; ++n) CHECK(std::abs(mu_n[n] - n) <= 1.5 * C / n + 1e-12);
}
