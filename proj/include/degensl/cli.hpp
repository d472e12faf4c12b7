// Batch driver: parse a JSON config, run the requested pipeline, persist
// deterministic artifacts.  Exit codes: 0 success, 2 validation error,
// 3 numerical failure (module error embedded in report.json).
#pragma once

#include <filesystem>
#include <string>

#include "degensl/io.hpp"
#include "degensl/pipeline.hpp"
#include "degensl/projections.hpp"
#include "degensl/zeros.hpp"

namespace degensl::cli {

using io::fmt17;
using io::json;

struct RunConfig {
  std::string command;
  json config;
  std::string out_dir;  // overrides config["out_dir"] when non-empty
};

namespace detail {

inline std::string resolve_out_dir(const RunConfig& rc) {
  std::string dir = rc.out_dir;
  if (dir.empty()) dir = rc.config.value("out_dir", std::string("."));
  std::filesystem::create_directories(dir);
  return dir;
}

inline PotentialGrid config_potential(const json& cfg, int n_points) {
  if (!cfg.contains("potential"))
    throw error(errc::validation, "config: missing field 'potential'");
  return io::load_potential(cfg.at("potential").get<std::string>(), n_points);
}

inline TargetDeterminant config_target(const json& cfg) {
  if (!cfg.contains("target")) throw error(errc::validation, "config: missing field 'target'");
  const json& t = cfg.at("target");
  if (t.is_string()) return io::target_from_json(io::load_json_file(t.get<std::string>()));
  return io::target_from_json(t);
}

inline DetKind config_det(const json& cfg) {
  const std::string d = cfg.value("determinant", std::string("delta"));
  if (d == "delta") return DetKind::delta;
  if (d == "dirichlet") return DetKind::dirichlet;
  throw error(errc::validation, "config: determinant must be 'delta' or 'dirichlet'");
}

inline SearchRegion config_region(const json& cfg) {
  if (!cfg.contains("region")) throw error(errc::validation, "config: missing field 'region'");
  const json& r = cfg.at("region");
  SearchRegion reg{r.at("re_min").get<double>(), r.at("re_max").get<double>(),
                   r.at("im_min").get<double>(), r.at("im_max").get<double>(),
                   cfg.value("refine_tol", 1e-9)};
  reg.validate();
  return reg;
}

inline GlOptions config_gl(const json& cfg) {
  GlOptions gl;
  const std::string tail = cfg.value("tail_mode", std::string("extended"));
  if (tail == "extended")
    gl.tail_mode = TailMode::extended;
  else if (tail == "hard-cut")
    gl.tail_mode = TailMode::hard_cut;
  else
    throw error(errc::validation, "config: tail_mode must be 'extended' or 'hard-cut'");
  const std::string quad = cfg.value("quadrature", std::string("simpson"));
  if (quad == "simpson")
    gl.quadrature = GlQuadrature::simpson;
  else if (quad == "trapezoid")
    gl.quadrature = GlQuadrature::trapezoid;
  else
    throw error(errc::validation, "config: quadrature must be 'simpson' or 'trapezoid'");
  gl.tail_horizon = cfg.value("tail_horizon", 0);
  if (cfg.contains("tolerances")) {
    const json& tol = cfg.at("tolerances");
    gl.cond_max = tol.value("cond_max", gl.cond_max);
    gl.gmres_tol = tol.value("gmres_tol", gl.gmres_tol);
  }
  gl.store_full_kernel = false;
  return gl;
}

inline json eigs_to_json(const std::vector<SpectralPoint>& zeros) {
  json j;
  j["zeros"] = json::array();
  int count = 0;
  for (const SpectralPoint& z : zeros) {
    j["zeros"].push_back({{"mu", {z.mu.real(), z.mu.imag()}},
                          {"lambda", {z.lambda.real(), z.lambda.imag()}},
                          {"multiplicity", z.multiplicity}});
    count += z.multiplicity;
  }
  j["count"] = count;
  return j;
}

// ---- command bodies -------------------------------------------------------

inline void run_forward(const json& cfg, const std::string& dir) {
  const int n = cfg.value("grid_points", 2049);
  const PotentialGrid q = config_potential(cfg, n);
  if (!cfg.contains("mu")) throw error(errc::validation, "config: missing field 'mu'");
  io::CsvWriter csv({"mu_re", "mu_im", "x", "c_re", "c_im", "cp_re", "cp_im", "s_re", "s_im",
                     "sp_re", "sp_im"});
  json rep;
  rep["records"] = json::array();
  for (const auto& muj : cfg.at("mu")) {
    const cplx mu(muj[0].get<double>(), muj[1].get<double>());
    const SolutionRecord rec = solve_fundamental(q, mu);
    for (int i = 0; i < rec.n_points(); ++i)
      csv.row({fmt17(mu.real()), fmt17(mu.imag()), fmt17(q.x(i)), fmt17(rec.c[i].real()),
               fmt17(rec.c[i].imag()), fmt17(rec.c_prime[i].real()), fmt17(rec.c_prime[i].imag()),
               fmt17(rec.s[i].real()), fmt17(rec.s[i].imag()), fmt17(rec.s_prime[i].real()),
               fmt17(rec.s_prime[i].imag())});
    const EndpointValues e = eval_at_pi(rec);
    rep["records"].push_back({{"mu", {mu.real(), mu.imag()}},
                              {"wronskian_defect", wronskian_defect(rec)},
                              {"c_pi", {e.c_pi.real(), e.c_pi.imag()}},
                              {"s_pi", {e.s_pi.real(), e.s_pi.imag()}},
                              {"c_prime_pi", {e.c_prime_pi.real(), e.c_prime_pi.imag()}},
                              {"s_prime_pi", {e.s_prime_pi.real(), e.s_prime_pi.imag()}}});
  }
  csv.save(dir + "/solution.csv");
  io::write_text(dir + "/report.json", rep.dump(2) + "\n");
}

inline void run_det_scan(const json& cfg, const std::string& dir) {
  const int n = cfg.value("grid_points", 2049);
  const PotentialGrid q = config_potential(cfg, n);
  const DetKind kind = config_det(cfg);
  if (!cfg.contains("mu_re")) throw error(errc::validation, "config: missing field 'mu_re'");
  const json& r = cfg.at("mu_re");
  const double lo = r.at("min").get<double>(), hi = r.at("max").get<double>();
  const int count = r.at("count").get<int>();
  if (count < 2 || !(hi > lo)) throw error(errc::validation, "config: bad mu_re range");
  const double im = cfg.value("mu_im", 0.0);

  io::CsvWriter csv({"mu_re", "mu_im", "delta_re", "delta_im"});
  double max_abs = 0;
  for (int k = 0; k < count; ++k) {
    const double re = lo + (hi - lo) * k / (count - 1);
    const cplx d = eval_det(kind, q, cplx(re, im), DetAccuracy::richardson);
    max_abs = std::max(max_abs, std::abs(d));
    csv.row({fmt17(re), fmt17(im), fmt17(d.real()), fmt17(d.imag())});
  }
  csv.save(dir + "/det_scan.csv");
  json rep;
  rep["max_abs_det"] = max_abs;
  rep["degenerate_floor"] = degenerate_floor(q);
  rep["degenerate_determinant"] = max_abs < degenerate_floor(q);
  io::write_text(dir + "/report.json", rep.dump(2) + "\n");
}

inline void run_eig(const json& cfg, const std::string& dir) {
  const int n = cfg.value("grid_points", 2049);
  const PotentialGrid q = config_potential(cfg, n);
  const BoundaryTheta theta(cfg.value("theta", 0));
  const std::vector<SpectralPoint> zeros =
      find_zeros(config_det(cfg), q, theta, config_region(cfg));
  io::write_text(dir + "/eigs.json", eigs_to_json(zeros).dump(2) + "\n");
}

inline void run_inverse(const json& cfg, const std::string& dir) {
  const TargetDeterminant t = config_target(cfg);
  InverseOptions opt;
  opt.grid_points = cfg.value("grid_points", 2049);
  opt.truncation_M = cfg.value("truncation_M", 64);
  opt.gl = config_gl(cfg);
  const InverseResult r = run_inverse_pipeline(t, opt);

  io::write_q_hat_csv(r.q_hat, dir + "/q_hat.csv");
  io::write_residuals_csv(r.report, dir + "/residuals.csv");
  json rep;
  rep["config"] = {{"grid_points", opt.grid_points},
                   {"truncation_M", opt.truncation_M},
                   {"tail_mode", opt.gl.tail_mode == TailMode::extended ? "extended" : "hard-cut"},
                   {"quadrature",
                    opt.gl.quadrature == GlQuadrature::simpson ? "simpson" : "trapezoid"}};
  rep["target"] = io::target_to_json(t);
  rep["aux"] = io::aux_to_json(r.aux);
  rep["results"] = io::report_results_json(r.report);
  io::write_text(dir + "/report.json", rep.dump(2) + "\n");
}

inline void run_verify(const json& cfg, const std::string& dir) {
  if (!cfg.contains("report") || !cfg.contains("q_hat"))
    throw error(errc::validation, "config: verify needs 'report' and 'q_hat' paths");
  const json prev = io::load_json_file(cfg.at("report").get<std::string>());
  const TargetDeterminant t = io::target_from_json(prev.at("target"));
  const AuxSpectrum aux = io::aux_from_json(prev.at("aux"));
  const PotentialGrid q_hat = io::load_q_hat_csv(cfg.at("q_hat").get<std::string>());
  const ReconstructionReport rep = verify_reconstruction(t, aux, q_hat);
  io::write_residuals_csv(rep, dir + "/residuals.csv");
  json out;
  out["target"] = io::target_to_json(t);
  out["aux"] = io::aux_to_json(aux);
  out["results"] = io::report_results_json(rep);
  io::write_text(dir + "/verify_report.json", out.dump(2) + "\n");
}

inline void run_green(const json& cfg, const std::string& dir) {
  const int n = cfg.value("grid_points", 2049);
  const PotentialGrid q = config_potential(cfg, n);
  const BoundaryTheta theta(cfg.value("theta", 0));
  if (!cfg.contains("mu")) throw error(errc::validation, "config: missing field 'mu'");
  const cplx mu(cfg.at("mu")[0].get<double>(), cfg.at("mu")[1].get<double>());
  const int n_eval = cfg.value("eval_points", 257);
  const GreenSample gs = green_function(q, theta, mu, n_eval);

  io::CsvWriter csv({"x", "xi", "g_re", "g_im"});
  for (int i = 0; i < n_eval; ++i)
    for (int j = 0; j < n_eval; ++j)
      csv.row({fmt17(gs.grid.x(i)), fmt17(gs.grid.x(j)), fmt17(gs.at(i, j).real()),
               fmt17(gs.at(i, j).imag())});
  csv.save(dir + "/green.csv");

  // boundary-condition residuals in x for sampled xi, and the diagonal jump.
  // xi stays clear of the endpoints so the one-sided stencils for dG/dx do
  // not cross the kink at xi = x.
  const double h = gs.grid.h();
  double bc1 = 0, bc2 = 0, jump = 0;
  for (int j = 5; j + 5 < n_eval; ++j) {
    auto dx_at = [&](int i0, int sgn) {  // one-sided 4th-order dG/dx
      cplx d = 0;
      const double c[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
      for (int k = 0; k < 5; ++k) d += c[k] * gs.at(i0 + sgn * k, j);
      return d * double(sgn) / (12.0 * h);
    };
    const cplx g0p = dx_at(0, +1), gpi = dx_at(n_eval - 1, -1);
    const double par = theta.parity();
    bc1 = std::max(bc1, std::abs(g0p + par * gpi));
    bc2 = std::max(bc2, std::abs(gs.at(0, j) - par * gs.at(n_eval - 1, j)));
    if (j > 1 && j + 2 < n_eval) {
      const cplx right = (gs.at(j + 1, j) - gs.at(j, j)) / h;
      const cplx left = (gs.at(j, j) - gs.at(j - 1, j)) / h;
      jump = std::max(jump, std::abs(right - left + 1.0));
    }
  }
  json rep;
  rep["mu"] = {mu.real(), mu.imag()};
  rep["theta"] = theta.theta;
  rep["scale"] = gs.scale();
  rep["bc_residual_derivative"] = bc1;
  rep["bc_residual_value"] = bc2;
  rep["jump_defect"] = jump;
  io::write_text(dir + "/report.json", rep.dump(2) + "\n");
}

inline void run_projections(const json& cfg, const std::string& dir) {
  const int n = cfg.value("grid_points", 2049);
  const PotentialGrid q = config_potential(cfg, n);
  const BoundaryTheta theta(cfg.value("theta", 0));
  const int n_eval = cfg.value("eval_points", 257);
  const int max_count = cfg.value("max_count", 8);
  std::vector<SpectralPoint> zeros = find_zeros(DetKind::delta, q, theta, config_region(cfg));
  std::sort(zeros.begin(), zeros.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return std::abs(a.lambda) < std::abs(b.lambda);
  });
  if (int(zeros.size()) > max_count) zeros.resize(max_count);

  io::CsvWriter csv({"n", "re_lambda", "im_lambda", "multiplicity", "proj_norm"});
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    double gap = 1e300;
    for (std::size_t k = 0; k < zeros.size(); ++k)
      if (k != i) gap = std::min(gap, std::abs(zeros[k].lambda - zeros[i].lambda));
    const double radius = (gap < 1e300) ? 0.5 * gap : 1.0;
    const ProjectionKernel p = spectral_projection(q, theta, zeros[i], radius, n_eval);
    csv.row({std::to_string(i + 1), fmt17(zeros[i].lambda.real()),
             fmt17(zeros[i].lambda.imag()), std::to_string(zeros[i].multiplicity),
             fmt17(projection_norm(p))});
  }
  csv.save(dir + "/proj_norms.csv");
  io::write_text(dir + "/eigs.json", eigs_to_json(zeros).dump(2) + "\n");
}

inline void run_diag(const json& cfg, const std::string& dir) {
  const int n = cfg.value("grid_points", 2049);
  const PotentialGrid q = config_potential(cfg, n);
  const BoundaryTheta theta(cfg.value("theta", 0));
  const double eps = cfg.value("epsilon", 0.3);
  const CompletenessReport rep = completeness_heuristic(q, theta, eps);
  json j;
  j["epsilon"] = eps;
  j["symmetry_defect_eps"] = rep.defect_eps;
  j["symmetry_defect_total"] = rep.defect_total;
  j["mismatch_plus"] = rep.mismatch_plus;
  j["mismatch_minus"] = rep.mismatch_minus;
  j["first_k_plus"] = rep.first_k_plus;
  j["first_k_minus"] = rep.first_k_minus;
  j["verdict"] = verdict_name(rep.verdict);
  io::write_text(dir + "/report.json", j.dump(2) + "\n");
}

}  // namespace detail

/// Run one command; returns the process exit code.
inline int run_command(const RunConfig& rc) {
  std::string dir;
  try {
    dir = detail::resolve_out_dir(rc);
    if (rc.command == "forward")
      detail::run_forward(rc.config, dir);
    else if (rc.command == "det-scan")
      detail::run_det_scan(rc.config, dir);
    else if (rc.command == "eig")
      detail::run_eig(rc.config, dir);
    else if (rc.command == "inverse")
      detail::run_inverse(rc.config, dir);
    else if (rc.command == "verify")
      detail::run_verify(rc.config, dir);
    else if (rc.command == "green")
      detail::run_green(rc.config, dir);
    else if (rc.command == "projections")
      detail::run_projections(rc.config, dir);
    else if (rc.command == "diag")
      detail::run_diag(rc.config, dir);
    else
      throw error(errc::validation, "unknown command: " + rc.command);
  } catch (const error& e) {
    const bool validation = e.code() == errc::validation;
    if (!validation && !dir.empty()) {
      json rep;
      rep["error"] = {{"kind", errc_name(e.code())}, {"message", e.what()}};
      try {
        io::write_text(dir + "/report.json", rep.dump(2) + "\n");
      } catch (...) {
      }
    }
    std::fprintf(stderr, "degensl %s: %s error: %s\n", rc.command.c_str(),
                 validation ? "validation" : "numerical", e.what());
    return validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "degensl %s: %s\n", rc.command.c_str(), e.what());
    return 3;
  }
  return 0;
}

/// Load a config file and run.
inline int run_from_files(const std::string& command, const std::string& config_path,
                          const std::string& out_dir) {
  RunConfig rc;
  rc.command = command;
  rc.out_dir = out_dir;
  try {
    rc.config = io::load_json_file(config_path);
  } catch (const error& e) {
    std::fprintf(stderr, "degensl: %s\n", e.what());
    return 2;
  }
  return run_command(rc);
}

}  // namespace degensl::cli
