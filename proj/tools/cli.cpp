#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "pdmnu/pdmnu.hpp"

#ifndef PDMNU_VERSION
#define PDMNU_VERSION "0.0.0"
#endif

namespace pdmnu::cli {

using json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::string csv_num(double v) { return std::isfinite(v) ? format_number(v) : std::string(); }
std::string csv_num(const std::optional<double>& v) { return v ? csv_num(*v) : std::string(); }

// Writes to a sibling temp file and renames it over the target.
bool write_output(const RunConfig& cfg, const std::string& text, std::ostream& out,
                  std::ostream& err) {
  if (cfg.out_path.empty()) {
    out << text;
    return true;
  }
  namespace fs = std::filesystem;
  const fs::path target(cfg.out_path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "error: cannot open " << tmp << " for writing\n";
      return false;
    }
    f << text;
    if (!f.flush()) {
      err << "error: write to " << tmp << " failed\n";
      return false;
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    err << "error: cannot rename " << tmp << " to " << target << ": " << ec.message() << "\n";
    fs::remove(tmp, ec);
    return false;
  }
  return true;
}

ModelParams make_params(const RunConfig& cfg) {
  return {cfg.v0, cfg.lambda, cfg.q, cfg.alpha, cfg.beta, cfg.eta};
}

Case selected_case(const RunConfig& cfg) { return cfg.case_index == 2 ? Case::two : Case::one; }

json params_json(const ModelParams& p) {
  json j;
  j["v0"] = num(p.v0());
  j["lambda"] = num(p.lambda());
  j["q"] = num(p.q());
  j["alpha"] = num(p.alpha());
  j["beta"] = num(p.beta());
  j["eta"] = num(p.eta());
  j["a_star"] = num(p.a_star());
  j["z"] = num(p.z());
  j["mu_sq"] = num(p.mu_sq());
  j["gamma"] = num(p.gamma());
  j["regime"] = p.regime() == Regime::full_line ? "full-line" : "half-line";
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int finish(const RunConfig& cfg, const std::string& text, int code, std::ostream& out,
           std::ostream& err) {
  return write_output(cfg, text, out, err) ? code : ExitCode::config_error;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ModelParams p = make_params(cfg);
  const Case c = selected_case(cfg);
  int count = 0;
  try {
    count = bound_state_count(p);
  } catch (const ComplexParameterError& e) {
    err << "error: complex parameter " << e.quantity() << " = " << format_number(e.value())
        << "\n";
    return ExitCode::complex_parameter;
  }

  struct Row {
    int n;
    double energy;
    PrintedEnergy eq38, eq41;
    QuantizationData qd;
    BoundState st;
  };
  std::vector<Row> rows;
  for (int n = 0; n < count; ++n) {
    const auto e = energy_level(p, n, c);
    if (!e) continue;
    rows.push_back({n, *e, energy_level_as_printed(p, n, Case::one),
                    energy_level_as_printed(p, n, Case::two), quantization(p, n, c),
                    bound_state(p, n, c)});
  }

  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "n,energy,energy_printed_eq38,energy_printed_eq41,Lambda,exponent_left,exponent_right,"
         "jacobi_a,jacobi_b,physical\n";
    for (const Row& r : rows)
      s << r.n << ',' << csv_num(r.energy) << ',' << csv_num(r.eq38.value) << ','
        << csv_num(r.eq41.value) << ',' << csv_num(r.qd.Lambda) << ','
        << csv_num(r.st.exponent_left) << ',' << csv_num(r.st.exponent_right) << ','
        << csv_num(r.st.jacobi_a) << ',' << csv_num(r.st.jacobi_b) << ','
        << (r.st.physical ? "true" : "false") << '\n';
    text = s.str();
  } else {
    json j;
    j["params"] = params_json(p);
    j["case"] = cfg.case_index;
    j["levels"] = json::array();
    for (const Row& r : rows) {
      json l;
      l["n"] = r.n;
      l["energy"] = num(r.energy);
      l["energy_printed_eq38"] = num(r.eq38.value);
      l["energy_printed_eq41"] = num(r.eq41.value);
      l["Lambda"] = num(r.qd.Lambda);
      l["zeta"] = num(r.qd.zeta);
      l["exponent_left"] = num(r.st.exponent_left);
      l["exponent_right"] = num(r.st.exponent_right);
      l["jacobi_a"] = num(r.st.jacobi_a);
      l["jacobi_b"] = num(r.st.jacobi_b);
      l["physical"] = r.st.physical;
      j["levels"].push_back(l);
    }
    j["version"] = PDMNU_VERSION;
    text = dump(j);
  }
  return finish(cfg, text, ExitCode::ok, out, err);
}

// ---------------------------------------------------------------------------

int cmd_wavefunction(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ModelParams p = make_params(cfg);
  if (p.regime() != Regime::full_line) {
    err << "error: closed-form wavefunctions are only available for q < 0\n";
    return ExitCode::config_error;
  }
  int count = 0;
  try {
    count = bound_state_count(p);
  } catch (const ComplexParameterError& e) {
    err << "error: complex parameter " << e.quantity() << " = " << format_number(e.value())
        << "\n";
    return ExitCode::complex_parameter;
  }
  if (cfg.n < 0 || cfg.n >= count) {
    err << "error: n = " << cfg.n << " out of range; " << count << " bound state(s)\n";
    return ExitCode::bad_quantum_number;
  }
  const BoundState st = bound_state(p, cfg.n);
  std::optional<Wavefunction> wf;
  try {
    wf.emplace(p, st);
  } catch (const UnphysicalStateError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::bad_quantum_number;
  }

  const GridSpec g{cfg.grid_min, cfg.grid_max, cfg.grid_n};
  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "# n=" << st.n << " energy=" << format_number(st.energy)
      << " exponent_left=" << format_number(st.exponent_left)
      << " exponent_right=" << format_number(st.exponent_right)
      << " jacobi_a=" << format_number(st.jacobi_a) << " jacobi_b=" << format_number(st.jacobi_b)
      << " eta=" << format_number(st.eta) << " norm_constant=" << format_number(st.norm_constant)
      << '\n';
    s << "x,s,psi,Phi\n";
    for (int i = 0; i < g.n_points; ++i) {
      const double x = g.x(i);
      const double sv = s_of_x(p, x).value;
      s << format_number(x) << ',' << format_number(sv) << ',' << format_number(wf->psi(sv))
        << ',' << format_number(wf->phi(x)) << '\n';
    }
    text = s.str();
  } else {
    json j;
    j["params"] = params_json(p);
    json stj;
    stj["n"] = st.n;
    stj["energy"] = num(st.energy);
    stj["exponent_left"] = num(st.exponent_left);
    stj["exponent_right"] = num(st.exponent_right);
    stj["jacobi_a"] = num(st.jacobi_a);
    stj["jacobi_b"] = num(st.jacobi_b);
    stj["norm_constant"] = num(st.norm_constant);
    j["state"] = stj;
    j["samples"] = json::array();
    for (int i = 0; i < g.n_points; ++i) {
      const double x = g.x(i);
      const double sv = s_of_x(p, x).value;
      j["samples"].push_back(json::array({num(x), num(sv), num(wf->psi(sv)), num(wf->phi(x))}));
    }
    j["version"] = PDMNU_VERSION;
    text = dump(j);
  }
  return finish(cfg, text, ExitCode::ok, out, err);
}

// ---------------------------------------------------------------------------

namespace {

struct LevelRecord {
  int n = 0;
  double closed = 0.0;
  PrintedEnergy eq38, eq41;
  std::optional<double> oracle_extrapolated;
  std::optional<double> oracle_finest;
  std::optional<double> rel_diff;
  double residual = 0.0;
  bool physical = false;
  std::optional<double> order;
  std::optional<double> leakage;
};

json convergence_json(const ConvergenceTable& t) {
  json arr = json::array();
  for (const auto& lv : t.levels) {
    json l;
    l["n"] = lv.n;
    l["spacing"] = json::array();
    l["eigenvalue"] = json::array();
    for (double h : lv.spacing) l["spacing"].push_back(num(h));
    for (double e : lv.eigenvalue) l["eigenvalue"].push_back(num(e));
    l["extrapolated"] = num(lv.extrapolated);
    l["error_estimate"] = num(lv.error_estimate);
    l["observed_order"] = num(lv.observed_order);
    arr.push_back(l);
  }
  return arr;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ModelParams p = make_params(cfg);
  const bool full_line = p.regime() == Regime::full_line;
  std::vector<std::string> warnings;
  int count = 0;
  try {
    count = bound_state_count(p);
  } catch (const ComplexParameterError& e) {
    const std::string msg =
        "complex parameter " + e.quantity() + " = " + format_number(e.value());
    if (full_line) {
      err << "error: " << msg << "\n";
      return ExitCode::complex_parameter;
    }
    warnings.push_back(msg + "; no closed-form levels");
  }

  std::vector<LevelRecord> levels;
  for (int n = 0; n < count; ++n) {
    const BoundState st = bound_state(p, n);
    LevelRecord r;
    r.n = n;
    r.closed = st.energy;
    r.eq38 = energy_level_as_printed(p, n, Case::one);
    r.eq41 = energy_level_as_printed(p, n, Case::two);
    r.residual = residual_scan(p, st);
    r.physical = st.physical;
    levels.push_back(r);
  }

  const LeftClosure closure = full_line ? LeftClosure::principal_exponent : LeftClosure::dirichlet;
  GridSpec grid = GridSpec::clipped_to_domain(p, cfg.grid_min, cfg.grid_max, cfg.grid_n,
                                              cfg.domain_eps);
  std::string status;
  int code = ExitCode::ok;
  json grid_json;
  std::optional<ConvergenceTable> table;
  int oracle_count = 0;
  std::vector<double> oracle_only;

  try {
    grid.validate();
    if (full_line) {
      const DomainFit fit = fit_domain(p, grid, std::max(count, 1), closure, cfg.leakage_tol);
      grid = fit.grid;
      if (fit.growth_steps > 0)
        warnings.push_back("domain widened " + std::to_string(fit.growth_steps) + " time(s)");
      ConvergenceOptions opts;
      opts.closure = closure;
      opts.max_levels = count + 2;
      opts.leakage_tol = cfg.leakage_tol;
      const auto ladder = refinement_ladder(grid);
      table = convergence_study(p, ladder, opts);
      oracle_count = table->accepted_per_grid.back();
      if (table->leakage_warning)
        warnings.push_back("eigenpairs with boundary leakage above tolerance were excluded");

      bool converged = fit.contained;
      for (std::size_t gi = 1; gi < table->accepted_per_grid.size(); ++gi)
        converged = converged && table->accepted_per_grid[gi] == table->accepted_per_grid[0];
      for (const auto& lv : table->levels) {
        if (lv.n >= count) continue;
        auto& r = levels[static_cast<std::size_t>(lv.n)];
        r.oracle_extrapolated = lv.extrapolated;
        r.oracle_finest = lv.eigenvalue.back();
        r.order = lv.observed_order;
        r.leakage = lv.max_leakage;
        const double oracle = cfg.richardson ? lv.extrapolated : lv.eigenvalue.back();
        r.rel_diff = std::fabs(r.closed - oracle) / std::fabs(r.closed);
        converged = converged && std::isfinite(lv.observed_order) &&
                    lv.observed_order >= 1.8 && lv.observed_order <= 2.2;
      }

      grid_json["x_min"] = num(grid.x_min);
      grid_json["x_max"] = num(grid.x_max);
      grid_json["n_points"] = grid.n_points;
      grid_json["closure"] = to_string(closure);
      grid_json["ladder"] = json::array();
      for (const auto& g : ladder) grid_json["ladder"].push_back(g.n_points);
      grid_json["richardson"] = cfg.richardson;

      if (!converged) {
        status = "oracle-non-convergence";
        code = ExitCode::oracle_nonconvergence;
      } else {
        bool pass = oracle_count == count;
        for (const auto& r : levels)
          pass = pass && r.rel_diff && *r.rel_diff <= cfg.tol && r.residual <= cfg.residual_tol;
        status = pass ? "verified" : "verification-failed";
        code = pass ? ExitCode::ok : ExitCode::verification_failure;
      }
    } else {
      // Half-line regime: single grid, Dirichlet at both ends, no verdict.
      const auto pairs =
          eigenvalues_below(discretize(p, grid, closure), 0.0, std::max(count, 1) + 2);
      for (const auto& pr : pairs) {
        if (pr.leakage > cfg.leakage_tol) continue;
        ++oracle_count;
        oracle_only.push_back(pr.eigenvalue);
      }
      for (auto& r : levels) {
        if (static_cast<std::size_t>(r.n) < pairs.size()) {
          const double e = pairs[static_cast<std::size_t>(r.n)].eigenvalue;
          r.oracle_finest = e;
          r.leakage = pairs[static_cast<std::size_t>(r.n)].leakage;
          r.rel_diff = std::fabs(r.closed - e) / std::fabs(r.closed);
        }
      }
      grid_json["x_min"] = num(grid.x_min);
      grid_json["x_max"] = num(grid.x_max);
      grid_json["n_points"] = grid.n_points;
      grid_json["closure"] = to_string(closure);
      grid_json["ladder"] = json::array({grid.n_points});
      grid_json["richardson"] = false;
      warnings.push_back("q > 0: half-line regime, closed form not verified against the oracle");
      status = "regime-unverified";
      code = ExitCode::ok;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  }

  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "n,E_closed,E_printed_eq38,E_printed_eq41,E_oracle_extrapolated,E_oracle_finest,"
         "rel_diff_closed_vs_oracle,residual_eq12,physical\n";
    for (const auto& r : levels)
      s << r.n << ',' << csv_num(r.closed) << ',' << csv_num(r.eq38.value) << ','
        << csv_num(r.eq41.value) << ',' << csv_num(r.oracle_extrapolated) << ','
        << csv_num(r.oracle_finest) << ',' << csv_num(r.rel_diff) << ',' << csv_num(r.residual)
        << ',' << (r.physical ? "true" : "false") << '\n';
    text = s.str();
  } else {
    json j;
    j["params"] = params_json(p);
    j["grid"] = grid_json;
    j["levels"] = json::array();
    for (const auto& r : levels) {
      json l;
      l["n"] = r.n;
      l["E_closed"] = num(r.closed);
      l["E_printed_eq38"] = num(r.eq38.value);
      l["E_printed_eq41"] = num(r.eq41.value);
      l["E_oracle_extrapolated"] = num(r.oracle_extrapolated);
      l["E_oracle_finest"] = num(r.oracle_finest);
      l["rel_diff_closed_vs_oracle"] = num(r.rel_diff);
      l["residual_eq12"] = num(r.residual);
      l["physical"] = r.physical;
      l["observed_order"] = num(r.order);
      l["leakage"] = num(r.leakage);
      j["levels"].push_back(l);
    }
    json v;
    v["status"] = status;
    v["exit_code"] = code;
    v["bound_state_count"] = count;
    v["oracle_count"] = oracle_count;
    v["tolerance"] = num(cfg.tol);
    v["residual_tolerance"] = num(cfg.residual_tol);
    v["oracle_value"] = cfg.richardson && full_line ? "extrapolated" : "finest";
    v["warning"] = !warnings.empty();
    v["warnings"] = warnings;
    if (!full_line) {
      v["oracle_eigenvalues"] = json::array();
      for (double e : oracle_only) v["oracle_eigenvalues"].push_back(num(e));
    }
    if (code == ExitCode::oracle_nonconvergence && table)
      v["convergence"] = convergence_json(*table);
    j["verdict"] = v;
    j["version"] = PDMNU_VERSION;
    text = dump(j);
  }
  if (code != ExitCode::ok) err << "verify: " << status << "\n";
  return finish(cfg, text, code, out, err);
}

// ---------------------------------------------------------------------------

int cmd_nu_demo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<HypergeometricForm> form;
  json model;
  if (cfg.model == "harmonic-oscillator") {
    form.emplace(Polynomial::constant(1.0), Polynomial::constant(0.0),
                 Polynomial::quadratic(cfg.ho_epsilon, 0.0, -1.0));
    model["name"] = cfg.model;
    model["epsilon"] = num(cfg.ho_epsilon);
  } else {
    const ModelParams p = make_params(cfg);
    double energy = 0.0;
    if (cfg.energy) {
      energy = *cfg.energy;
    } else {
      try {
        const auto e = energy_level(p, 0);
        if (!e) {
          err << "error: no bound state to demo; pass --energy\n";
          return ExitCode::bad_quantum_number;
        }
        energy = *e;
      } catch (const ComplexParameterError& e) {
        err << "error: complex parameter " << e.quantity() << " = "
            << format_number(e.value()) << "\n";
        return ExitCode::complex_parameter;
      }
    }
    form.emplace(assemble_ode(p, energy));
    model["name"] = cfg.model;
    model["params"] = params_json(p);
    model["energy"] = num(energy);
  }

  std::vector<NuBranch> branches;
  try {
    branches = candidate_branches(*form);
  } catch (const NoRealBranchError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::complex_parameter;
  }
  const auto sel = select_physical(branches, *form);

  // Quantization: which n (if any) has lambda_n equal to the selected lambda(k).
  std::optional<int> matched_n;
  double lambda_k = 0.0;
  if (sel) {
    const NuBranch& b = branches[sel->index];
    lambda_k = b.lambda_of_k;
    for (int n = 0; n <= 1000; ++n) {
      const double ln = eigenvalue_rule(b, *form, n);
      if (std::fabs(ln - lambda_k) <= 1e-9 * std::max(1.0, std::fabs(lambda_k))) {
        matched_n = n;
        break;
      }
      if (ln > lambda_k + 1.0 && n > 2) break;
    }
  }

  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "branch,k,pi,tau,tau_prime,lambda_of_k,admissible,selected\n";
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const auto& b = branches[i];
      s << "k" << (b.k_index + 1) << (b.sign > 0 ? "+" : "-") << ',' << csv_num(b.k) << ','
        << b.pi.to_string() << ',' << b.tau.to_string() << ',' << csv_num(b.tau_prime) << ','
        << csv_num(b.lambda_of_k) << ',' << (b.admissible ? "true" : "false") << ','
        << (sel && sel->index == i ? "true" : "false") << '\n';
    }
    text = s.str();
  } else {
    json j;
    j["model"] = model;
    j["form"] = {{"sigma", form->sigma().to_string()},
                 {"tau_tilde", form->tau_tilde().to_string()},
                 {"sigma_tilde", form->sigma_tilde().to_string()}};
    j["branches"] = json::array();
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const auto& b = branches[i];
      json bj;
      bj["label"] = "k" + std::to_string(b.k_index + 1) + (b.sign > 0 ? "+" : "-");
      bj["k"] = num(b.k);
      bj["pi"] = b.pi.to_string();
      bj["tau"] = b.tau.to_string();
      bj["tau_prime"] = num(b.tau_prime);
      bj["lambda_of_k"] = num(b.lambda_of_k);
      bj["admissible"] = b.admissible;
      bj["selected"] = sel && sel->index == i;
      j["branches"].push_back(bj);
    }
    json q;
    q["selection_rule"] = sel ? json(sel->rule) : json(nullptr);
    q["lambda_of_k"] = sel ? num(lambda_k) : json(nullptr);
    q["n"] = matched_n ? json(*matched_n) : json(nullptr);
    q["quantized"] = matched_n.has_value();
    j["quantization"] = q;
    j["version"] = PDMNU_VERSION;
    text = dump(j);
  }
  return finish(cfg, text, ExitCode::ok, out, err);
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"PDM Hulthen bound states by the Nikiforov-Uvarov method", "pdmnu"};
  app.set_version_flag("--version", PDMNU_VERSION);
  app.set_config("--config", "", "Flat key=value file; command-line flags override it");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--v0", cfg.v0, "Potential strength V0")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "Screening parameter (> 0)")->capture_default_str();
  app.add_option("--q", cfg.q, "Deformation parameter (!= 0)")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Ordering parameter alpha")->capture_default_str();
  app.add_option("--beta", cfg.beta, "Ordering parameter beta")->capture_default_str();
  app.add_option("--eta", cfg.eta, "Wavefunction transform exponent")->capture_default_str();
  app.add_option("--case", cfg.case_index, "Quantization case")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  app.add_option("--grid-min", cfg.grid_min)->capture_default_str();
  app.add_option("--grid-max", cfg.grid_max)->capture_default_str();
  app.add_option("--grid-n", cfg.grid_n, "Grid points")
      ->check(CLI::Range(3, 100000000))
      ->capture_default_str();
  app.add_option("--domain-eps", cfg.domain_eps, "Offset from x_s for q > 0 grids")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* format_opt = app.add_option("--format", cfg.format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out_path, "Output file (default stdout)");
  app.add_option("--tol", cfg.tol, "Closed form vs oracle relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--residual-tol", cfg.residual_tol)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--leakage-tol", cfg.leakage_tol)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "Bound-state energies");
  auto* wave = app.add_subcommand("wavefunction", "Sampled normalized wavefunction");
  wave->add_option("--n", cfg.n, "Quantum number")->required();
  auto* verify = app.add_subcommand("verify", "Closed form vs finite-difference oracle");
  bool no_richardson = false;
  verify->add_flag("--no-richardson", no_richardson, "Compare against the finest grid only");
  auto* demo = app.add_subcommand("nu-demo", "NU branch table for a built-in model");
  demo->add_option("--model", cfg.model)
      ->required()
      ->check(CLI::IsMember({"harmonic-oscillator", "hulthen-pdm"}));
  demo->add_option("--ho-epsilon", cfg.ho_epsilon, "epsilon in sigma_tilde = epsilon - s^2")
      ->capture_default_str();
  double energy = 0.0;
  auto* energy_opt = demo->add_option("--energy", energy, "Energy fed to the Hulthen form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForVersion&) {
    out << PDMNU_VERSION << "\n";
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  }
  cfg.richardson = !no_richardson;
  if (*wave && format_opt->count() == 0) cfg.format = "csv";
  if (energy_opt->count() > 0) cfg.energy = energy;

  try {
    (void)make_params(cfg);
    if (!(cfg.grid_min < cfg.grid_max))
      throw std::invalid_argument("--grid-min must be < --grid-max");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  }

  if (*spectrum) return cmd_spectrum(cfg, out, err);
  if (*wave) return cmd_wavefunction(cfg, out, err);
  if (*verify) return cmd_verify(cfg, out, err);
  if (*demo) return cmd_nu_demo(cfg, out, err);
  return ExitCode::config_error;
}

}  // namespace pdmnu::cli
