// End-to-end inverse pipeline: target -> auxiliary data -> kernel ->
// GL solve -> potential -> forward verification.
#pragma once

#include "degensl/glkernel.hpp"
#include "degensl/verify.hpp"

namespace degensl {

struct InverseOptions {
  int grid_points = 2049;
  int truncation_M = 64;
  GlOptions gl;
  bool with_verify = true;
};

struct InverseResult {
  AuxSpectrum aux;
  KernelSet kernel;
  PotentialGrid q_hat;
  ReconstructionReport report;
};

inline InverseResult run_inverse_pipeline(const TargetDeterminant& t, const InverseOptions& opt) {
  t.validate();
  if (opt.grid_points < 9)
    throw error(errc::validation, "inverse pipeline: grid_points must be >= 9");
  if (opt.truncation_M < 1)
    throw error(errc::validation, "inverse pipeline: truncation_M must be >= 1");

  InverseResult out;
  out.aux = make_aux_spectrum(t, opt.truncation_M);
  out.kernel = assemble_F(out.aux, Grid(opt.grid_points), t, opt.gl);
  solve_gelfand_levitan(out.kernel, opt.gl);
  out.q_hat = extract_potential(out.kernel);
  if (opt.with_verify) {
    out.report = verify_reconstruction(t, out.aux, out.q_hat);
  } else {
    out.report.q_hat = out.q_hat;
  }
  out.report.probe_norm = out.kernel.probe_norm;
  out.report.tail_bound = out.kernel.tail_bound;
  out.report.cond_samples = out.kernel.cond_samples;
  if (out.report.min_re_w == 0) {
    out.report.min_re_w = 1e300;
    for (const cplx& w : out.aux.w_seq)
      out.report.min_re_w = std::min(out.report.min_re_w, w.real());
  }
  return out;
}

}  // namespace degensl
