// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pdmnu/pdmnu.hpp"

using namespace pdmnu;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += " [over time budget]";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %d. %-34s %8.3f s (< %g s)  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs,
              budget_s, o.detail.c_str());
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

ModelParams reference(double eta = 0.5) { return {10.0, 1.0, -1.0, -0.5, 0.0, eta}; }

// reference energies from the quantization condition, evaluated separately
constexpr double kReference[] = {-7.298437881283575, -2.8953136438507268, -0.4921894064178782};

ModelParams random_real(std::mt19937_64& rng, double eta) {
  std::uniform_real_distribution<double> v(1.0, 60.0), lam(0.2, 3.0), q(-3.0, -0.2), ab(-1.0, 1.0);
  for (;;) {
    const ModelParams p{v(rng), lam(rng), q(rng), ab(rng), ab(rng), eta};
    if (p.mu_sq() >= 0.0 && 1.0 + 4.0 * p.gamma() >= 0.0 && bound_state_count(p) > 0) return p;
  }
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pdmnu");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

}  // namespace

int main() {
  criterion(1, "NU regression (oscillator)", 1.0, [] {
    Outcome o;
    for (int n = 0; n <= 5; ++n) {
      const HypergeometricForm f(Polynomial::constant(1.0), Polynomial::constant(0.0),
                                 Polynomial::quadratic(2.0 * n + 1.0, 0.0, -1.0));
      const auto br = candidate_branches(f);
      const auto sel = select_physical(br, f);
      if (!sel || br[sel->index].lambda_of_k != eigenvalue_rule(br[sel->index], f, n)) o.pass = false;
    }
    o.detail = "lambda(k) == lambda_n for n = 0..5, exact";
    return o;
  });

  criterion(2, "Algebraic identity suite", 1.0, [] {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.1, 5.0), en(-50.0, -1e-3);
    double worst = 0.0, worst_inv = 0.0;
    for (int i = 0; i < 2000; ++i) {
      double q = u(rng);
      if (std::fabs(q) < 1e-3) q = 1.0;
      const ModelParams p{pos(rng) * 4.0, pos(rng), q, u(rng), u(rng), u(rng)};
      const double e = en(rng);
      const auto xi = xi_coefficients(p, e);
      const double el = e / (p.lambda() * p.lambda());
      const double scale =
          std::max({std::fabs(xi.xi1), std::fabs(xi.xi2), std::fabs(xi.xi3), std::fabs(el)});
      worst = std::max(worst, std::fabs(xi.xi1 - xi.xi2 + xi.xi3 + el) / scale);
      // eta-free combinations at a different eta and energy
      const ModelParams p2 = p.with_eta(u(rng));
      const auto xi2 = xi_coefficients(p2, en(rng));
      const double z = p2.z();
      worst_inv = std::max({worst_inv,
                            std::fabs(xi2.xi3 + z * z - p.mu_sq()) / std::max(1.0, std::fabs(p.mu_sq())),
                            std::fabs(xi2.xi1 + z * (z - 1.0) - p.gamma()) /
                                std::max(1.0, std::fabs(p.gamma()))});
    }
    return Outcome{worst <= 1e-12 && worst_inv <= 1e-12,
                   "2000 draws, max identity rel " + sci(worst) + ", invariants " + sci(worst_inv) +
                       " (tol 1e-12)"};
  });

  criterion(3, "eta-invariance of energies", 1.0, [] {
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int set = 0; set < 50; ++set) {
      const ModelParams p = random_real(rng, 0.0);
      for (int n = 0; n < bound_state_count(p); ++n) {
        const double e0 = *energy_level(p, n);
        for (double eta : {0.25, 0.5, 1.0, 2.0})
          worst = std::max(worst, rel(*energy_level(p.with_eta(eta), n), e0));
      }
    }
    return Outcome{worst <= 1e-12, "50 sets x eta {0,1/4,1/2,1,2}, max rel " + sci(worst) + " (tol 1e-12)"};
  });

  criterion(4, "Closed form vs oracle", 10.0, [] {
    const auto p = reference();
    Outcome o;
    const int count = bound_state_count(p);
    ConvergenceOptions opts;
    opts.closure = LeftClosure::principal_exponent;
    const GridSpec finest{-30.0, 30.0, 4000};
    const auto table = convergence_study(p, refinement_ladder(finest), opts);
    const auto single = eigenvalues_below(discretize(p, finest, opts.closure), 0.0, 5);
    double worst_ex = 0.0, worst_single = 0.0;
    o.pass = count == 3 && table.levels.size() == 3 && single.size() == 3;
    for (std::size_t n = 0; o.pass && n < 3; ++n) {
      worst_ex = std::max(worst_ex, rel(table.levels[n].extrapolated, kReference[n]));
      worst_single = std::max(worst_single, rel(single[n].eigenvalue, kReference[n]));
      worst_ex = std::max(worst_ex, rel(*energy_level(p, static_cast<int>(n)), kReference[n]));
    }
    o.pass = o.pass && worst_ex <= 1e-5 && worst_single <= 1e-3;
    o.detail = std::to_string(count) + " levels, Richardson rel " + sci(worst_ex) +
               " (tol 1e-5), N=4000 rel " + sci(worst_single) + " (tol 1e-3)";
    return o;
  });

  criterion(5, "Transformed-equation residual", 1.0, [] {
    const auto p = reference();
    double worst = 0.0, least_perturbed = INFINITY;
    for (int n = 0; n < 3; ++n) {
      auto st = bound_state(p, n);
      worst = std::max(worst, residual_scan(p, st));
      st.energy += 0.1;
      least_perturbed = std::min(least_perturbed, residual_scan(p, st));
    }
    return Outcome{worst <= 1e-8 && least_perturbed > 1e-3,
                   "max " + sci(worst) + " (tol 1e-8), E+0.1 min " + sci(least_perturbed) +
                       " (> 1e-3)"};
  });

  criterion(6, "Self-adjointness consequences", 5.0, [] {
    const auto p = reference();
    std::vector<Wavefunction> wf;
    for (int n = 0; n < 3; ++n) wf.emplace_back(p, bound_state(p, n));
    IntegrationOptions opts;
    opts.rel_tol = 1e-12;
    double worst = 0.0;
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        auto f = [&](double x) { return wf[m].phi(x) * wf[n].phi(x); };
        const double lo = std::min(wf[m].support().first, wf[n].support().first);
        const double hi = std::max(wf[m].support().second, wf[n].support().second);
        const double g = integrate(f, lo, 0.0, opts) + integrate(f, 0.0, hi, opts);
        worst = std::max(worst, std::fabs(g - (m == n ? 1.0 : 0.0)));
      }
    bool nodes_ok = true;
    for (int n = 0; n < 3; ++n) {
      int changes = 0;
      double prev = wf[n].psi(1e-4);
      for (int i = 1; i <= 20000; ++i) {
        const double v = wf[n].psi(1e-4 + i * (1.0 - 2e-4) / 20000.0);
        if (v * prev < 0.0) ++changes;
        if (v != 0.0) prev = v;
      }
      nodes_ok = nodes_ok && changes == n;
    }
    return Outcome{worst <= 1e-6 && nodes_ok,
                   "Gram max dev " + sci(worst) + " (tol 1e-6), nodes " +
                       (nodes_ok ? "0,1,2" : "mismatch")};
  });

  criterion(7, "FD sanity (particle in a box)", 5.0, [] {
    const ModelParams free{0.0, 1.0, 1e-200, 0.0, -1.0, 0.0};
    const GridSpec g{0.0, 1.0, 1001};
    const double h = g.h();
    const auto pairs = eigenvalues_below(discretize(free, g), 1000.0, 10);
    double worst = pairs.size() == 10 ? 0.0 : INFINITY;
    for (std::size_t k = 1; k <= pairs.size(); ++k) {
      const double s = std::sin(static_cast<double>(k) * std::numbers::pi * h / 2.0);
      worst = std::max(worst, rel(pairs[k - 1].eigenvalue, 4.0 / (h * h) * s * s));
    }
    ConvergenceOptions opts;
    opts.threshold = 500.0;
    opts.leakage_tol = 1.0;
    const auto table =
        convergence_study(free, {{0.0, 1.0, 101}, {0.0, 1.0, 201}, {0.0, 1.0, 401}}, opts);
    double worst_order = 0.0;
    for (const auto& lv : table.levels)
      worst_order = std::max(worst_order, std::fabs(lv.observed_order - 2.0));
    return Outcome{worst <= 1e-10 && !table.levels.empty() && worst_order <= 0.2,
                   "discrete formula rel " + sci(worst) + " (tol 1e-10), |order-2| " +
                       sci(worst_order) + " (tol 0.2)"};
  });

  criterion(8, "As-printed comparison", 5.0, [] {
    const auto p = reference();
    double worst = 0.0;
    bool valid = true;
    for (int n = 0; n < 3; ++n) {
      const auto pe = energy_level_as_printed(p, n);
      valid = valid && pe.valid();
      if (pe.valid()) worst = std::max(worst, rel(*pe.value, *energy_level(p, n)));
    }
    const bool invalid_at_zero = !energy_level_as_printed(reference(0.0), 0).valid();
    const auto report = nlohmann::json::parse(run_cli({"verify"}).out);
    bool columns = !report["levels"].empty();
    for (const auto& l : report["levels"])
      columns = columns && l.contains("E_printed_eq38") && l.contains("E_printed_eq41");
    return Outcome{valid && worst <= 1e-12 && invalid_at_zero && columns,
                   "eta=1/2 rel " + sci(worst) + " (tol 1e-12), eta=0 " +
                       (invalid_at_zero ? "invalid" : "VALID") + ", report columns " +
                       (columns ? "present" : "missing")};
  });

  criterion(9, "CLI contract", 10.0, [] {
    std::ifstream f(GOLDEN_DIR "/verify_reference.json", std::ios::binary);
    std::ostringstream golden;
    golden << f.rdbuf();
    const bool same = run_cli({"verify"}).out == golden.str() && !golden.str().empty();
    struct Scenario {
      int code;
      std::vector<std::string> args;
    };
    const std::vector<Scenario> scenarios = {
        {0, {"verify"}},
        {2, {"spectrum", "--lambda", "-1"}},
        {3, {"spectrum", "--alpha", "0", "--beta", "0"}},
        {4, {"wavefunction", "--n", "5"}},
        {5, {"verify", "--tol", "1e-9", "--no-richardson"}},
        {6, {"verify", "--grid-n", "40"}},
    };
    std::string codes;
    bool ok = same;
    for (const auto& s : scenarios) {
      const int got = run_cli(s.args).code;
      ok = ok && got == s.code;
      codes += std::to_string(got) + (&s == &scenarios.back() ? "" : "/");
    }
    return Outcome{ok, std::string("golden ") + (same ? "identical" : "DIFFERS") + ", exit codes " + codes};
  });

  std::printf("%s\n", failures == 0 ? "all criteria pass" : "some criteria FAILED");
  return failures == 0 ? 0 : 1;
}
