// File formats: JSON targets/configs/reports and the plot-ready CSV tables.
// All numerics are written as decimal scientific with 17 significant digits
// so doubles round-trip losslessly and runs are byte-reproducible.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "degensl/auxspectrum.hpp"
#include "degensl/target.hpp"
#include "degensl/types.hpp"
#include "degensl/verify.hpp"

namespace degensl::io {

using nlohmann::json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw error(errc::validation, "cannot open for writing: " + path);
  f << text;
}

/// gnuplot-friendly CSV: header row, comma separators, no whitespace.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  void save(const std::string& path) const { write_text(path, out_.str()); }
  std::string str() const { return out_.str(); }

private:
  std::ostringstream out_;
};

inline json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error(errc::validation, "cannot open file: " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw error(errc::validation, "malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

// ---------------------------------------------------------------------------
// Target files: {"sine_coeffs": [[re, im], ...], "m": int, "scale": float}
// ---------------------------------------------------------------------------

inline TargetDeterminant target_from_json(const json& j) {
  if (!j.is_object() || !j.contains("sine_coeffs"))
    throw error(errc::validation, "target: missing field 'sine_coeffs'");
  TargetDeterminant t;
  for (const auto& c : j.at("sine_coeffs")) {
    if (!c.is_array() || c.size() != 2)
      throw error(errc::validation, "target: 'sine_coeffs' entries must be [re, im] pairs");
    t.sine_coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  t.m = j.value("m", 0);
  t.scale = j.value("scale", 1.0);
  t.validate();
  return t;
}

inline json target_to_json(const TargetDeterminant& t) {
  json j;
  j["sine_coeffs"] = json::array();
  for (const cplx& a : t.sine_coeffs) j["sine_coeffs"].push_back({a.real(), a.imag()});
  j["m"] = t.m;
  j["scale"] = t.scale;
  return j;
}

// ---------------------------------------------------------------------------
// Potentials: named built-ins or {"samples": [[x, re, im], ...]}
// ---------------------------------------------------------------------------

inline PotentialGrid potential_from_json(const json& j, int n_points) {
  if (!j.is_object() || !j.contains("samples"))
    throw error(errc::validation, "potential file: missing field 'samples'");
  std::vector<std::pair<double, cplx>> samples;
  for (const auto& s : j.at("samples")) {
    if (!s.is_array() || s.size() != 3)
      throw error(errc::validation, "potential file: 'samples' entries must be [x, re, im]");
    samples.emplace_back(s[0].get<double>(), cplx(s[1].get<double>(), s[2].get<double>()));
  }
  return resample_linear(n_points, std::move(samples));
}

/// Accepts a built-in name (zero, linear, cos2x, asym-bump) or a path to a
/// JSON sample file.
inline PotentialGrid load_potential(const std::string& name_or_path, int n_points) {
  if (name_or_path == "zero") return corpus::zero(n_points);
  if (name_or_path == "linear") return corpus::linear(n_points);
  if (name_or_path == "cos2x") return corpus::cos2x(n_points);
  if (name_or_path == "asym-bump") return corpus::asym_bump(n_points);
  return potential_from_json(load_json_file(name_or_path), n_points);
}

// ---------------------------------------------------------------------------
// Aux spectrum and reconstruction report
// ---------------------------------------------------------------------------

inline json aux_to_json(const AuxSpectrum& aux) {
  json j;
  j["N"] = aux.N;
  j["mu_seq"] = json::array();
  j["c_seq"] = json::array();
  j["w_seq"] = json::array();
  for (double m : aux.mu_seq) j["mu_seq"].push_back(m);
  for (const cplx& c : aux.c_seq) j["c_seq"].push_back({c.real(), c.imag()});
  for (const cplx& w : aux.w_seq) j["w_seq"].push_back({w.real(), w.imag()});
  return j;
}

inline AuxSpectrum aux_from_json(const json& j) {
  AuxSpectrum aux;
  aux.N = j.at("N").get<int>();
  for (const auto& m : j.at("mu_seq")) aux.mu_seq.push_back(m.get<double>());
  for (const auto& c : j.at("c_seq")) aux.c_seq.emplace_back(c[0].get<double>(), c[1].get<double>());
  for (const auto& w : j.at("w_seq")) aux.w_seq.emplace_back(w[0].get<double>(), w[1].get<double>());
  aux.validate();
  return aux;
}

inline json report_results_json(const ReconstructionReport& rep) {
  json r;
  r["max_residual"] = rep.max_residual();
  r["max_dirichlet_mismatch"] = rep.max_dirichlet_mismatch();
  r["max_c_mismatch"] = rep.max_c_mismatch();
  r["probe_norm"] = rep.probe_norm;
  r["tail_bound"] = rep.tail_bound;
  r["min_re_w"] = rep.min_re_w;
  r["cond_samples"] = rep.cond_samples;
  r["dirichlet_match"] = json::array();
  for (const auto& e : rep.dirichlet_match) r["dirichlet_match"].push_back({e.n, e.mismatch});
  r["c_match"] = json::array();
  for (const auto& e : rep.c_match) r["c_match"].push_back({e.n, e.mismatch});
  r["unit_product"] = json::array();
  for (const auto& e : rep.unit_product) r["unit_product"].push_back({e.n, e.mismatch});
  return r;
}

inline void write_residuals_csv(const ReconstructionReport& rep, const std::string& path) {
  CsvWriter csv({"mu", "re_residual", "im_residual"});
  for (const auto& e : rep.residual_table) {
    const cplx d = e.delta_hat - e.v;
    csv.row({fmt17(e.mu), fmt17(d.real()), fmt17(d.imag())});
  }
  csv.save(path);
}

inline void write_q_hat_csv(const PotentialGrid& q, const std::string& path) {
  CsvWriter csv({"x", "q_re", "q_im"});
  for (int i = 0; i < q.n_points; ++i)
    csv.row({fmt17(q.x(i)), fmt17(q.values[i].real()), fmt17(q.values[i].imag())});
  csv.save(path);
}

inline PotentialGrid load_q_hat_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error(errc::validation, "cannot open file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw error(errc::validation, "empty q_hat file: " + path);
  std::vector<cplx> vals;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    double x, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
      throw error(errc::validation, "malformed q_hat row: " + line);
    vals.emplace_back(re, im);
  }
  const int n = int(vals.size());
  return PotentialGrid(n, std::move(vals));
}

}  // namespace degensl::io
