#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace pdmnu::cli {

enum ExitCode : int {
  ok = 0,
  config_error = 2,
  complex_parameter = 3,
  bad_quantum_number = 4,
  verification_failure = 5,
  oracle_nonconvergence = 6,
};

struct RunConfig {
  // Model; defaults are the reference parameter set.
  double v0 = 10.0;
  double lambda = 1.0;
  double q = -1.0;
  double alpha = -0.5;
  double beta = 0.0;
  double eta = 0.5;
  int case_index = 1;

  double grid_min = -30.0;
  double grid_max = 30.0;
  int grid_n = 4000;
  double domain_eps = 1e-3;

  std::string format = "json";
  std::string out_path;

  double tol = 1e-3;
  double residual_tol = 1e-8;
  double leakage_tol = 1e-8;
  bool richardson = true;

  int n = 0;
  std::string model;
  double ho_epsilon = 5.0;
  std::optional<double> energy;
};

/// Parses argv and dispatches to a subcommand. Reports go to `out` (or to
/// --out, written atomically); diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_wavefunction(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_nu_demo(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// printf("%.9g"); fixed so reports are byte-stable.
std::string format_number(double v);

}  // namespace pdmnu::cli
