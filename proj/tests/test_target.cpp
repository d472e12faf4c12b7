#include <catch2/catch.hpp>

#include <random>

#include "degensl/target.hpp"

using namespace degensl;

namespace {

// test-side oracle: composite Simpson for Int_0^pi g(t) sin(mu t) dt
cplx quadrature_f(const TargetDeterminant& t, cplx mu, int n = 32769) {
  const double h = kPi / (n - 1);
  cplx acc = 0;
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    cplx g = 0;
    for (int k = 1; k <= t.band_limit(); ++k) g += t.sine_coeffs[k - 1] * std::sin(k * x);
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * g * std::sin(mu * x);
  }
  return t.scale * acc * (h / 3.0);
}

}  // namespace

TEST_CASE("single-mode closed forms") {
  const TargetDeterminant t{{cplx(1, 0)}, 0, 1.0};
  CHECK(std::abs(eval_f(t, cplx(3, 0))) < 1e-14);                 // sin(3pi)/(1-9)
  CHECK(std::abs(eval_f(t, cplx(1, 0)) - kPi / 2.0) < 1e-14);     // removable limit
  CHECK(std::abs(eval_v(t, cplx(0, 0)) - kPi) < 1e-14);           // v(0) = f'(0)
  CHECK(std::abs(eval_v(t, cplx(2, 0))) < 1e-14);                 // f(2) = 0
}

TEST_CASE("f is odd and v is even at random complex mu") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  const TargetDeterminant t{{cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.05, 0)}, 1, 0.7};
  for (int it = 0; it < 50; ++it) {
    const cplx mu(6.0 * U(rng), 2.0 * U(rng));
    CHECK(std::abs(eval_f(t, mu) + eval_f(t, -mu)) < 1e-13);
    CHECK(std::abs(eval_v(t, mu) - eval_v(t, -mu)) < 1e-13);
  }
}

TEST_CASE("exponential type: |f| within the coefficient-mass envelope") {
  const TargetDeterminant t{{cplx(0.4, 0.0), cplx(0.0, 0.3)}, 0, 1.0};
  double mass = 0;
  for (const cplx& a : t.sine_coeffs) mass += std::abs(a);
  for (double im : {0.5, 1.0, 2.0, 3.0})
    for (double re : {0.0, 2.7, 9.3}) {
      const cplx mu(re, im);
      CHECK(std::abs(eval_f(t, mu)) <= mass * kPi * std::exp(kPi * im));
    }
}

TEST_CASE("closed-form evaluation agrees with numeric quadrature") {
  const TargetDeterminant t{{cplx(0.5, 0.2), cplx(-0.3, 0.0), cplx(0.1, -0.4)}, 2, 1.3};
  for (const cplx mu : {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(2.0 + 1e-7, 0.0), cplx(7.3, 0.9),
                        cplx(50.0, 0.0), cplx(-13.6, -0.5)}) {
    CHECK(std::abs(eval_f(t, mu) - quadrature_f(t, mu)) < 1e-10);
  }
}

TEST_CASE("derivative matches a central-difference oracle") {
  const TargetDeterminant t{{cplx(0.5, 0.2), cplx(-0.3, 0.0)}, 0, 1.0};
  for (const cplx mu : {cplx(0.4, 0.1), cplx(2.0, 0.0), cplx(6.6, -0.7)}) {
    const double d = 1e-6;
    const cplx fd = (eval_f(t, mu + d) - eval_f(t, mu - d)) / (2.0 * d);
    CHECK(std::abs(eval_f_prime(t, mu) - fd) < 1e-7);
  }
}

TEST_CASE("evaluation is continuous across the removable points") {
  const TargetDeterminant t{{cplx(1, 0), cplx(0.5, 0)}, 0, 1.0};
  for (int k = 1; k <= 2; ++k)
    for (double off : {1e-9, 1e-5, 2e-4}) {
      const cplx a = eval_f(t, cplx(k + off, 0.0));
      const cplx b = eval_f(t, cplx(k - off, 0.0));
      CHECK(std::abs(a - b) < 4.0 * off * kPi * kPi);  // |f'| <= pi * mass bound
    }
  // and across the v branch at |mu| = 0.5: no jump beyond curvature scale
  const cplx va = eval_v(t, cplx(0.499999, 0.0));
  const cplx vb = eval_v(t, cplx(0.5, 0.0));
  const cplx vc = eval_v(t, cplx(0.500001, 0.0));
  CHECK(std::abs(va - 2.0 * vb + vc) < 1e-10);
}

TEST_CASE("sup_bound_check: small target passes at N = 2") {
  const TargetDeterminant t{{cplx(0.01, 0)}, 0, 1.0};
  const SupBoundReport rep = sup_bound_check(t, 2);
  CHECK(rep.pass);
  CHECK(rep.max_abs_v < 0.1);
  CHECK(rep.max_abs_f < 1.0);
}

TEST_CASE("sup_bound_check: large target fails with a located violation") {
  const TargetDeterminant t{{cplx(10, 0)}, 0, 1.0};
  const SupBoundReport rep = sup_bound_check(t, 2);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_abs_f >= 1.0);
  CHECK(std::abs(eval_f(t, rep.argmax_f)) == Approx(rep.max_abs_f));
}

TEST_CASE("sup_bound_check: the zero target passes for every N") {
  const TargetDeterminant t{{cplx(1, 0)}, 0, 0.0};
  for (int N : {2, 3, 17, 100}) CHECK(sup_bound_check(t, N).pass);
}

TEST_CASE("target validation") {
  CHECK_THROWS_AS(TargetDeterminant{}.validate(), error);
  TargetDeterminant bad{{cplx(1, 0)}, -1, 1.0};
  CHECK_THROWS_AS(bad.validate(), error);
  TargetDeterminant neg{{cplx(1, 0)}, 0, -2.0};
  CHECK_THROWS_AS(neg.validate(), error);
}
