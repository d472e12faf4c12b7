// degensl <command> --config <path> [--out <dir>]
//
// Commands: forward, det-scan, eig, inverse, verify, green, projections, diag.

#include <string>

#include <CLI11.hpp>

#include "degensl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville toolkit for degenerate two-point boundary conditions"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  const char* names[] = {"forward", "det-scan", "eig", "inverse", "verify",
                         "green",   "projections", "diag"};
  const char* descs[] = {
      "integrate the fundamental system for listed mu values",
      "tabulate a characteristic determinant along a mu line",
      "locate determinant zeros in a rectangle with multiplicities",
      "run the constructive inverse pipeline for a target determinant",
      "re-verify a reconstruction from its artifacts",
      "sample the Green function and its boundary diagnostics",
      "spectral projections and norm table for leading eigenvalues",
      "completeness / symmetry diagnostics for a potential"};
  for (int i = 0; i < 8; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;  // bad usage is a validation error
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  return degensl::cli::run_from_files(cmd, config_path, out_dir);
}
