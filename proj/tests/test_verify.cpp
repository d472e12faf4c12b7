#include <catch2/catch.hpp>

#include "degensl/pipeline.hpp"

using namespace degensl;

TEST_CASE("check grid dodges integers and construction nodes") {
  const TargetDeterminant t{{cplx(0.01, 0)}, 0, 1.0};
  const auto aux = make_aux_spectrum(t, 16);
  const auto grid = make_check_grid(aux);
  REQUIRE(!grid.empty());
  CHECK(grid.back() <= 16.0 - 0.25);
  for (double mu : grid) {
    CHECK(std::abs(mu - std::round(mu)) >= 0.1);
    for (double mn : aux.mu_seq) CHECK(std::abs(mu - mn) >= 0.1);
  }
}

TEST_CASE("zero target: the full pipeline is an exact fixed point") {
  const TargetDeterminant t{{cplx(1, 0)}, 0, 0.0};
  InverseOptions opt;
  opt.grid_points = 513;
  opt.truncation_M = 24;
  const InverseResult r = run_inverse_pipeline(t, opt);
  CHECK(r.q_hat.max_norm() <= 1e-8);
  for (const cplx& w : r.aux.w_seq) CHECK(std::abs(w - 1.0 / kPi) <= 1e-12);
  CHECK(r.report.max_residual() <= 1e-8);
  CHECK(r.report.probe_norm <= 1e-10);
}

TEST_CASE("small target pipeline: construction guarantees hold") {
  const TargetDeterminant t{{cplx(0.01, 0)}, 0, 1.0};
  InverseOptions opt;
  opt.grid_points = 1025;
  opt.truncation_M = 32;
  opt.gl.store_full_kernel = false;
  const InverseResult r = run_inverse_pipeline(t, opt);

  CHECK(r.report.min_re_w > 0.0);
  CHECK(r.report.probe_norm <= 1e-10);
  // forward consistency: Dirichlet zeros of q_hat sit at the construction
  // nodes, c_hat(pi, mu_n) near c_n, and the Wronskian ties them together
  CHECK(r.report.max_dirichlet_mismatch() < 1e-5);
  CHECK(r.report.max_c_mismatch() < 1e-3);
  for (const auto& e : r.report.unit_product) CHECK(e.mismatch < 1e-4);
  // residuals are finite and tabulated over the full check grid
  CHECK(!r.report.residual_table.empty());
  for (const auto& e : r.report.residual_table) CHECK(std::isfinite(e.abs_residual));
}

TEST_CASE("verify is deterministic for identical inputs") {
  const TargetDeterminant t{{cplx(0.01, 0)}, 0, 1.0};
  InverseOptions opt;
  opt.grid_points = 513;
  opt.truncation_M = 16;
  opt.gl.store_full_kernel = false;
  const InverseResult r = run_inverse_pipeline(t, opt);
  const ReconstructionReport again = verify_reconstruction(t, r.aux, r.q_hat);
  REQUIRE(again.residual_table.size() == r.report.residual_table.size());
  for (std::size_t i = 0; i < again.residual_table.size(); ++i)
    CHECK(std::abs(again.residual_table[i].abs_residual -
                   r.report.residual_table[i].abs_residual) <= 1e-12);
}
