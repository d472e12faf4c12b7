// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Tolerances are fixed here, not configurable.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "degensl/cli.hpp"
#include "degensl/green.hpp"
#include "degensl/pipeline.hpp"
#include "degensl/projections.hpp"

using namespace degensl;
namespace fs = std::filesystem;

namespace {

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Wronskian invariant over the corpus
// --------------------------------------------------------------------------
Outcome criterion1() {
  Clock clk;
  const int n = 4097;
  const PotentialGrid corpus_q[] = {corpus::zero(n), corpus::linear(n), corpus::cos2x(n),
                                    corpus::asym_bump(n), corpus::complex_mix(n)};
  std::vector<cplx> mus;
  const double ims[] = {0.0, 1.0, -1.0, 2.0, -2.0};
  for (int k = 0; k < 20; ++k) mus.emplace_back(0.5 + k, ims[k % 5]);
  double worst = 0;
  for (const auto& q : corpus_q)
    for (const cplx mu : mus) worst = std::max(worst, wronskian_defect(solve_fundamental(q, mu)));
  const double t = clk.seconds();
  const bool pass = worst <= 1e-8 && t < 10.0;
  return {pass, "max |c s' - c' s - 1| = " + fmt(worst) + " (tol 1e-8), " + fmt(t) + " s"};
}

// --------------------------------------------------------------------------
// 2. Degeneracy dichotomy on a 100-point mu grid
// --------------------------------------------------------------------------
Outcome criterion2() {
  Clock clk;
  const fs::path dir = fs::temp_directory_path() / "degensl_acc2";
  fs::remove_all(dir);
  auto scan = [&](const std::string& pot, const std::string& sub) {
    cli::RunConfig rc;
    rc.command = "det-scan";
    rc.out_dir = (dir / sub).string();
    rc.config = cli::json{{"potential", pot},
                          {"grid_points", 1025},
                          {"determinant", "delta"},
                          {"mu_re", {{"min", 0.05}, {"max", 5.0}, {"count", 100}}}};
    if (cli::run_command(rc) != 0) return cli::json();
    return io::load_json_file(rc.out_dir + "/report.json");
  };
  const cli::json jz = scan("zero", "zero");
  const cli::json js = scan("cos2x", "sym");
  const cli::json jl = scan("linear", "lin");
  bool pass = !jz.empty() && !js.empty() && !jl.empty();
  double max_zero = 0, max_sym = 0, max_lin = 0;
  if (pass) {
    max_zero = jz.at("max_abs_det").get<double>();
    max_sym = js.at("max_abs_det").get<double>();
    max_lin = jl.at("max_abs_det").get<double>();
    pass = max_zero <= 1e-7 && max_sym <= 1e-7 && max_lin > 1e-2 &&
           jz.at("degenerate_determinant").get<bool>() &&
           js.at("degenerate_determinant").get<bool>() &&
           !jl.at("degenerate_determinant").get<bool>();
  }
  const double t = clk.seconds();
  fs::remove_all(dir);
  pass = pass && t < 10.0;
  return {pass, "max|Delta|: zero " + fmt(max_zero) + ", cos2x " + fmt(max_sym) + " (tol 1e-7, "
                "flags raised), linear " + fmt(max_lin) + " (> 1e-2), " + fmt(t) + " s"};
}

// --------------------------------------------------------------------------
// 3. Free Dirichlet spectrum with multiplicities and winding count
// --------------------------------------------------------------------------
Outcome criterion3() {
  Clock clk;
  const auto q = corpus::zero(513);
  const SearchRegion region{0.5, 10.5, -1.0, 1.0, 1e-9};
  bool pass = true;
  double worst = 0;
  std::string note;
  try {
    const auto zeros = find_zeros(DetKind::dirichlet, q, BoundaryTheta(0), region);
    pass = zeros.size() == 10;
    for (std::size_t k = 0; k < zeros.size() && pass; ++k) {
      worst = std::max(worst, std::abs(zeros[k].mu - cplx(double(k + 1), 0.0)));
      pass = pass && zeros[k].multiplicity == 1;
    }
    pass = pass && worst <= 1e-7;
    const int count = winding_count(DetKind::dirichlet, q, region);
    pass = pass && count == 10;
    note = "zeros mu = 1..10 within " + fmt(worst) + " (tol 1e-7), winding = " +
           std::to_string(count);
  } catch (const error& e) {
    pass = false;
    note = std::string("error: ") + e.what();
  }
  const double t = clk.seconds();
  pass = pass && t < 30.0;
  return {pass, note + ", " + fmt(t) + " s"};
}

// --------------------------------------------------------------------------
// 4. Paley-Wiener behaviour of mu Delta(mu) for q(x) = x
// --------------------------------------------------------------------------
Outcome criterion4() {
  Clock clk;
  const auto q = corpus::linear(4097);
  double total = 0, tail = 0, maxv = 0, prev = 0;
  const double dmu = 0.25;
  bool finite = true;
  for (double mu = 0.0; mu <= 200.0 + 1e-9; mu += dmu) {
    const double v =
        (mu == 0.0) ? 0.0 : std::abs(mu * char_det(q, cplx(mu, 0.0), DetAccuracy::richardson));
    finite = finite && std::isfinite(v);
    const double cell = 0.5 * (v * v + prev * prev) * dmu;
    total += cell;
    if (mu > 150.0) tail += cell;
    maxv = std::max(maxv, v);
    prev = v;
  }
  const double frac = tail / total;
  double even_worst = 0;
  for (int k = 1; k <= 20; ++k) {
    const cplx mu(0.35 + 0.9 * k, (k % 3) - 1.0);
    even_worst = std::max(even_worst, std::abs(char_det(q, mu) - char_det(q, -mu)));
  }
  const double t = clk.seconds();
  const bool pass = finite && maxv < 1e3 && frac < 0.01 && even_worst <= 1e-10;
  return {pass, "sup |mu Delta| = " + fmt(maxv) + ", L2 tail fraction " + fmt(frac) +
                " (< 1%), evenness defect " + fmt(even_worst) + " (tol 1e-10), " + fmt(t) + " s"};
}

// --------------------------------------------------------------------------
// 5. Inverse fixed point for the zero target
// --------------------------------------------------------------------------
Outcome criterion5() {
  Clock clk;
  const TargetDeterminant t{{cplx(1, 0)}, 0, 0.0};
  InverseOptions opt;
  opt.grid_points = 2049;
  opt.truncation_M = 64;
  opt.gl.store_full_kernel = false;
  const InverseResult r = run_inverse_pipeline(t, opt);
  double wdev = 0;
  for (const cplx& w : r.aux.w_seq) wdev = std::max(wdev, std::abs(w - 1.0 / kPi));
  const double qn = r.q_hat.max_norm();
  const double el = clk.seconds();
  const bool pass = qn <= 1e-8 && wdev <= 1e-12;
  return {pass, "||q_hat||_inf = " + fmt(qn) + " (tol 1e-8), max |w_n - 1/pi| = " + fmt(wdev) +
                " (tol 1e-12), " + fmt(el) + " s"};
}

// --------------------------------------------------------------------------
// 6. Inverse round-trip for the a = (0.01) target
// --------------------------------------------------------------------------
Outcome criterion6() {
  Clock clk;
  const TargetDeterminant t{{cplx(0.01, 0)}, 0, 1.0};
  auto run = [&](int n, int M) {
    InverseOptions opt;
    opt.grid_points = n;
    opt.truncation_M = M;
    opt.gl.store_full_kernel = false;
    return run_inverse_pipeline(t, opt);
  };
  const InverseResult r1 = run(2049, 64);
  const InverseResult r2 = run(4097, 128);

  const bool re_w_ok = r1.report.min_re_w > 0.0;
  const bool probe_ok = r1.report.probe_norm <= 1e-10;
  const double res1 = r1.report.max_residual();
  const double res2 = r2.report.max_residual();
  const bool res_ok = res1 <= 1e-3;
  const bool decline_ok = res1 >= 2.0 * res2;
  double dir1 = 0;
  for (const auto& e : r1.report.dirichlet_match)
    if (e.n <= 10) dir1 = std::max(dir1, e.mismatch);
  const bool dir_ok = dir1 <= 1e-5;
  const double el = clk.seconds();
  const bool pass = re_w_ok && probe_ok && res_ok && decline_ok && dir_ok && el < 300.0;

  std::ostringstream d;
  d << "Re w_n > 0 " << (re_w_ok ? "ok" : "FAIL") << "; probe " << fmt(r1.report.probe_norm)
    << " (tol 1e-10) " << (probe_ok ? "ok" : "FAIL") << "; max residual " << fmt(res1)
    << " (tol 1e-3) " << (res_ok ? "ok" : "FAIL") << "; decline x" << fmt(res1 / res2) << " (>= 2) "
    << (decline_ok ? "ok" : "FAIL") << "; Dirichlet n<=10 " << fmt(dir1) << " (tol 1e-5) "
    << (dir_ok ? "ok" : "FAIL") << "; " << fmt(el) << " s";
  return {pass, d.str()};
}

// --------------------------------------------------------------------------
// 7. Green function diagnostics for q(x) = x
// --------------------------------------------------------------------------
Outcome criterion7() {
  Clock clk;
  const auto q = corpus::linear(2049);
  const cplx mu(0.5, 0.5);
  const int ne = 513;
  const GreenSample gs = green_function(q, BoundaryTheta(0), mu, ne);
  const double h = gs.grid.h();
  const double scale = gs.scale();

  double bc = 0;
  for (int j = 8; j < ne - 8; j += 8) {
    auto dx = [&](int i0, int sgn) {
      const double c[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
      cplx d = 0;
      for (int k = 0; k < 5; ++k) d += c[k] * gs.at(i0 + sgn * k, j);
      return d * double(sgn) / (12.0 * h);
    };
    bc = std::max(bc, std::abs(dx(0, +1) + dx(ne - 1, -1)));
    bc = std::max(bc, std::abs(gs.at(0, j) - gs.at(ne - 1, j)));
  }
  const bool bc_ok = bc <= 1e-6 * scale;

  double jump = 0;
  for (int j = 16; j < ne - 16; j += 16) {
    const cplx right = (gs.at(j + 1, j) - gs.at(j, j)) / h;
    const cplx left = (gs.at(j, j) - gs.at(j - 1, j)) / h;
    jump = std::max(jump, std::abs(right - left + 1.0));
  }
  const bool jump_ok = jump <= 10.0 * h;

  // raw vs combined numerator at 50 random triples
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> U(0, 1);
  double phidiff = 0;
  for (int it = 0; it < 50; ++it) {
    const cplx m2(0.3 + 2.0 * U(rng), -0.6 + 1.2 * U(rng));
    const SolutionRecord rec = solve_fundamental(q, m2);
    const EndpointValues e = eval_at_pi(rec);
    const int i = 1 + int(U(rng) * 2046), j = 1 + int(U(rng) * 2046);
    const cplx raw = degensl::detail::phi_raw(e, rec.c[i], rec.s[i], rec.c[j], rec.s[j]);
    const cplx comb = degensl::detail::phi_combined(e, rec.c[i], rec.s[i], rec.c[j], rec.s[j]);
    phidiff = std::max(phidiff, std::abs(raw - comb) / (1.0 + std::abs(comb)));
  }
  const bool phi_ok = phidiff <= 1e-12;

  // large-mu leading term at mu = 40
  const auto q4 = corpus::linear(4097);
  const SolutionRecord rec = solve_fundamental(q4, cplx(40.0, 0.0));
  const EndpointValues e = eval_at_pi(rec);
  double asym = 0;
  for (int i = 128; i < 4097; i += 256)
    for (int j = 64; j < 4097; j += 320) {
      const double x = q4.x(i), xi = q4.x(j);
      const cplx phi = degensl::detail::phi_combined(e, rec.c[i], rec.s[i], rec.c[j], rec.s[j]);
      const cplx lead = std::sin(40.0 * (x - xi)) + std::sin(40.0 * (kPi - x - xi));
      asym = std::max(asym, std::abs(40.0 * phi / 2.0 - lead));
    }
  const bool asym_ok = asym <= 0.1;

  const double el = clk.seconds();
  const bool pass = bc_ok && jump_ok && phi_ok && asym_ok && el < 60.0;
  return {pass, "BC residual " + fmt(bc / scale) + "*scale (tol 1e-6); jump defect " + fmt(jump) +
                " (tol " + fmt(10.0 * h) + "); raw-vs-combined numerator " + fmt(phidiff) +
                " (tol 1e-12); large-mu leading term at mu=40 " + fmt(asym) + " (tol 0.1); " +
                fmt(el) + " s"};
}

// --------------------------------------------------------------------------
// 8. Spectral projections for the first five eigenvalues, q(x) = x
// --------------------------------------------------------------------------
Outcome criterion8() {
  Clock clk;
  const auto q = corpus::linear(1025);
  const BoundaryTheta theta(0);
  const SearchRegion region{0.2, 6.0, -2.5, 2.5, 1e-9};
  auto zeros = find_zeros(DetKind::delta, q, theta, region);
  std::sort(zeros.begin(), zeros.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return std::abs(a.lambda) < std::abs(b.lambda);
  });
  if (zeros.size() < 5) return {false, "found only " + std::to_string(zeros.size()) + " zeros"};
  zeros.resize(5);

  std::vector<ProjectionKernel> proj;
  double trace_def = 0, idem_def = 0, cross = 0, min_norm = 1e300;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    double gap = 1e300;
    for (std::size_t k = 0; k < zeros.size(); ++k)
      if (k != i) gap = std::min(gap, std::abs(zeros[k].lambda - zeros[i].lambda));
    proj.push_back(spectral_projection(q, theta, zeros[i], 0.5 * gap, 257));
    const ProjectionKernel& p = proj.back();
    trace_def = std::max(trace_def,
                         std::abs(projection_trace(p) - double(zeros[i].multiplicity)));
    double pmax = 0;
    for (const cplx& v : p.values) pmax = std::max(pmax, std::abs(v));
    const ProjectionKernel pp = compose(p, p);
    double d = 0;
    for (std::size_t k = 0; k < pp.values.size(); ++k)
      d = std::max(d, std::abs(pp.values[k] - p.values[k]));
    idem_def = std::max(idem_def, d / pmax);
    min_norm = std::min(min_norm, projection_norm(p));
  }
  for (std::size_t i = 0; i < proj.size(); ++i)
    for (std::size_t j = i + 1; j < proj.size(); ++j) {
      const ProjectionKernel pq = compose(proj[i], proj[j]);
      double pi_max = 0, pj_max = 0, c = 0;
      for (const cplx& v : proj[i].values) pi_max = std::max(pi_max, std::abs(v));
      for (const cplx& v : proj[j].values) pj_max = std::max(pj_max, std::abs(v));
      for (const cplx& v : pq.values) c = std::max(c, std::abs(v));
      cross = std::max(cross, c / (pi_max * pj_max));
    }
  const double el = clk.seconds();
  const bool pass = trace_def <= 1e-3 && idem_def <= 1e-3 && cross <= 1e-3 &&
                    min_norm >= 1.0 - 1e-3 && el < 120.0;
  return {pass, "|trace - mult| " + fmt(trace_def) + "; idempotence " + fmt(idem_def) +
                "; pairwise " + fmt(cross) + " (all tol 1e-3); min norm " + fmt(min_norm) +
                " (>= 1 - 1e-3); " + fmt(el) + " s"};
}

// --------------------------------------------------------------------------
// 9. Determinism of the criterion-6 configuration
// --------------------------------------------------------------------------
Outcome criterion9() {
  Clock clk;
  const fs::path dir = fs::temp_directory_path() / "degensl_acc9";
  fs::remove_all(dir);
  const cli::json cfg = cli::json{
      {"target", {{"sine_coeffs", {{0.01, 0.0}}}, {"m", 0}, {"scale", 1.0}}},
      {"grid_points", 2049},
      {"truncation_M", 64}};
  for (const char* sub : {"a", "b"}) {
    cli::RunConfig rc;
    rc.command = "inverse";
    rc.out_dir = (dir / sub).string();
    rc.config = cfg;
    if (cli::run_command(rc) != 0) return {false, "inverse run failed"};
  }
  bool pass = true;
  for (const char* f : {"q_hat.csv", "report.json", "residuals.csv"})
    pass = pass && slurp(dir / "a" / f) == slurp(dir / "b" / f);
  const double el = clk.seconds();
  fs::remove_all(dir);
  return {pass, std::string(pass ? "byte-identical artifacts" : "artifacts differ") + ", " +
                fmt(el) + " s"};
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Row rows[] = {
      {1, "Wronskian invariant", criterion1},
      {2, "degeneracy dichotomy", criterion2},
      {3, "Dirichlet spectrum of the free problem", criterion3},
      {4, "Paley-Wiener growth of mu Delta", criterion4},
      {5, "inverse fixed point (zero target)", criterion5},
      {6, "inverse round-trip (a = 0.01)", criterion6},
      {7, "Green function diagnostics", criterion7},
      {8, "spectral projections", criterion8},
      {9, "determinism", criterion9},
  };
  int failures = 0;
  for (const Row& r : rows) {
    Outcome out;
    try {
      out = r.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s — %s\n", out.pass ? "PASS" : "FAIL", r.id, r.name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
