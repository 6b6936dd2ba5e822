#pragma once

// Finite-difference check of the closed form: the self-adjoint operator
//   H = -d/dx (1/m d/dx) + V_eff
// discretized on a uniform grid, low eigenvalues by Sturm-sequence bisection,
// eigenvectors by inverse iteration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmnu/errors.hpp"
#include "pdmnu/model.hpp"
#include "pdmnu/nu_engine.hpp"
#include "pdmnu/spectrum.hpp"

namespace pdmnu {

struct GridSpec {
  double x_min = -30.0;
  double x_max = 30.0;
  int n_points = 4000;

  void validate() const {
    if (!(x_min < x_max)) throw std::invalid_argument("grid requires x_min < x_max");
    if (n_points < 3) throw std::invalid_argument("grid requires n_points >= 3");
  }
  double h() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + i * h(); }
  int intervals() const { return n_points - 1; }

  /// Same interval, spacing halved.
  GridSpec refined() const { return {x_min, x_max, 2 * (n_points - 1) + 1}; }

  /// Starts at x_s + eps when the model has a singular point inside the range.
  static GridSpec clipped_to_domain(const ModelParams& p, double x_min, double x_max,
                                    int n_points, double eps) {
    if (p.regime() == Regime::half_line)
      x_min = std::max(x_min, p.singular_abscissa() + eps);
    return {x_min, x_max, n_points};
  }
};

/// How the left end of the grid is closed.
/// dirichlet: phi(x_min) = 0.
/// principal_exponent: phi(x_0) = r phi(x_1) with r from the principal
/// solution s^{1/2 + sqrt(mu_sq)} of H at x -> -inf (q < 0 only). This
/// selects the same solution as x_min -> -inf but without the O(1/|x_min|)
/// bias that plain truncation has when mu_sq is small.
enum class LeftClosure { dirichlet, principal_exponent };

inline const char* to_string(LeftClosure c) {
  return c == LeftClosure::dirichlet ? "dirichlet" : "principal_exponent";
}

/// Symmetric tridiagonal matrix on the interior nodes 1..n_points-2.
struct TridiagonalOperator {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples unknowns i and i+1
  GridSpec grid;
  double left_ratio = 0.0;  // phi(x_0) = left_ratio * phi(x_1)

  std::size_t size() const { return diag.size(); }
};

/// Staggered conservative scheme: off-diagonal -(1/m_{i+1/2})/h^2, diagonal
/// (1/m_{i-1/2} + 1/m_{i+1/2})/h^2 + V_eff(x_i).
template <class InverseMass, class Potential>
TridiagonalOperator discretize_operator(InverseMass&& inv_mass, Potential&& veff,
                                        const GridSpec& g, double left_ratio = 0.0) {
  g.validate();
  const int m = g.n_points - 2;
  const double h = g.h();
  const double h2 = h * h;
  std::vector<double> half(static_cast<std::size_t>(g.n_points - 1));
  for (int i = 0; i + 1 < g.n_points; ++i)
    half[static_cast<std::size_t>(i)] = inv_mass(g.x_min + (i + 0.5) * h);

  TridiagonalOperator t;
  t.grid = g;
  t.left_ratio = left_ratio;
  t.diag.resize(static_cast<std::size_t>(m));
  t.off.resize(static_cast<std::size_t>(std::max(m - 1, 0)));
  for (int i = 0; i < m; ++i) {
    const auto j = static_cast<std::size_t>(i);
    t.diag[j] = (half[j] + half[j + 1]) / h2 + veff(g.x(i + 1));
    if (i + 1 < m) t.off[j] = -half[j + 1] / h2;
  }
  if (m > 0) t.diag[0] -= left_ratio * half[0] / h2;
  return t;
}

/// phi(x_0)/phi(x_1) for phi ~ s^{1/2 + sqrt(mu_sq)}.
inline double principal_left_ratio(const ModelParams& p, const GridSpec& g) {
  if (p.regime() != Regime::full_line)
    throw std::invalid_argument("principal-exponent closure needs q < 0");
  if (p.mu_sq() < 0.0) throw ComplexParameterError("mu_sq", p.mu_sq());
  const double exponent = 0.5 + std::sqrt(p.mu_sq());
  const double s0 = mass_at(p, g.x(0));
  const double s1 = mass_at(p, g.x(1));
  return std::pow(s0 / s1, exponent);
}

inline TridiagonalOperator discretize(const ModelParams& p, const GridSpec& g,
                                      LeftClosure closure = LeftClosure::dirichlet) {
  g.validate();
  if (!p.in_domain(g.x_min))
    throw DomainError("grid starts outside the physical domain", p.singular_abscissa());
  const double ratio =
      closure == LeftClosure::principal_exponent ? principal_left_ratio(p, g) : 0.0;
  return discretize_operator([&](double x) { return 1.0 / mass_at(p, x); },
                             [&](double x) { return effective_potential_at(p, x); }, g, ratio);
}

namespace detail {

inline double pivot_floor(const TridiagonalOperator& t) {
  double emax = 1.0;
  for (double e : t.off) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

}  // namespace detail

/// Number of eigenvalues strictly below `shift` (negative pivots of the
/// LDL^T factorization of T - shift I).
inline int sturm_count(const TridiagonalOperator& t, double shift) {
  const double floor = detail::pivot_floor(t);
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    q = t.diag[i] - shift - (i > 0 ? t.off[i - 1] * t.off[i - 1] / q : 0.0);
    if (std::fabs(q) < floor) q = -floor;
    if (q < 0.0) ++count;
  }
  return count;
}

/// Gershgorin interval.
inline std::pair<double, double> spectral_bounds(const TridiagonalOperator& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = (i > 0 ? std::fabs(t.off[i - 1]) : 0.0) +
                     (i + 1 < t.size() ? std::fabs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

struct OracleEigenpair {
  int index = 0;
  double eigenvalue = 0.0;
  std::vector<double> vector;  // samples on all grid nodes, trapezoid-normalized
  double leakage = 0.0;        // fraction of |v|^2 on the outer 5% of nodes at each end
};

namespace detail {

// Solve (T - shift I) x = rhs by the Thomas algorithm.
inline std::vector<double> shifted_solve(const TridiagonalOperator& t, double shift,
                                         std::vector<double> rhs) {
  const std::size_t n = t.size();
  const double floor = std::max(pivot_floor(t), 1e-300);
  std::vector<double> c(n, 0.0);
  double piv = t.diag[0] - shift;
  if (std::fabs(piv) < floor) piv = floor;
  if (n > 1) c[0] = t.off[0] / piv;
  rhs[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = t.diag[i] - shift - t.off[i - 1] * c[i - 1];
    if (std::fabs(piv) < floor) piv = std::copysign(floor, piv == 0.0 ? 1.0 : piv);
    if (i + 1 < n) c[i] = t.off[i] / piv;
    rhs[i] = (rhs[i] - t.off[i - 1] * rhs[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

inline double bisect_eigenvalue(const TridiagonalOperator& t, int k, double lo, double hi) {
  // Invariant: sturm_count(lo) <= k < sturm_count(hi).
  for (int iter = 0; iter < 400; ++iter) {
    const double width = hi - lo;
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    if (width <= std::max(1e-12, 4.0 * std::numeric_limits<double>::epsilon() * scale)) break;
    const double mid = lo + 0.5 * width;
    if (sturm_count(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return lo + 0.5 * (hi - lo);
}

inline double trapezoid_norm_sq(const std::vector<double>& v, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    sum += w * v[i] * v[i];
  }
  return sum * h;
}

inline double leakage_fraction(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t edge = std::max<std::size_t>(1, (n + 19) / 20);
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = v[i] * v[i];
    total += w;
    if (i < edge || i + edge >= n) outer += w;
  }
  return total > 0.0 ? std::clamp(outer / total, 0.0, 1.0) : 0.0;
}

}  // namespace detail

/// Lowest eigenvalues of T below `threshold` (at most max_count), ascending.
inline std::vector<OracleEigenpair> eigenvalues_below(const TridiagonalOperator& t,
                                                      double threshold, int max_count) {
  std::vector<OracleEigenpair> out;
  if (t.size() == 0 || max_count <= 0) return out;
  const int below = std::min(sturm_count(t, threshold), max_count);
  if (below == 0) return out;
  const double lo = spectral_bounds(t).first - 1.0;
  const double h = t.grid.h();

  for (int k = 0; k < below; ++k) {
    OracleEigenpair pair;
    pair.index = k;
    pair.eigenvalue = detail::bisect_eigenvalue(t, k, lo, threshold);

    // Deterministic start vector.
    std::vector<double> x(t.size());
    std::uint64_t state = 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(k);
    for (double& xi : x) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      xi = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    for (int iter = 0; iter < 4; ++iter) {
      x = detail::shifted_solve(t, pair.eigenvalue, std::move(x));
      // Keep clear of earlier vectors with (nearly) the same eigenvalue.
      for (const auto& prev : out) {
        if (std::fabs(prev.eigenvalue - pair.eigenvalue) >
            1e-9 * std::max(1.0, std::fabs(pair.eigenvalue)))
          continue;
        double dot = 0.0, nrm = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          dot += x[i] * prev.vector[i + 1];
          nrm += prev.vector[i + 1] * prev.vector[i + 1];
        }
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot / nrm * prev.vector[i + 1];
      }
      double amax = 0.0;
      for (double xi : x) amax = std::max(amax, std::fabs(xi));
      if (amax == 0.0 || !std::isfinite(amax)) break;
      for (double& xi : x) xi /= amax;
    }

    std::vector<double> full(t.size() + 2, 0.0);
    std::copy(x.begin(), x.end(), full.begin() + 1);
    full[0] = t.left_ratio * full[1];
    const double nrm = std::sqrt(detail::trapezoid_norm_sq(full, h));
    double amax = 0.0;
    for (double v : full) amax = std::max(amax, std::fabs(v));
    // Sign: rightmost non-negligible sample positive.
    double sign = 1.0;
    for (std::size_t i = full.size(); i-- > 0;)
      if (std::fabs(full[i]) > 1e-6 * amax) {
        sign = full[i] > 0.0 ? 1.0 : -1.0;
        break;
      }
    for (double& v : full) v *= sign / nrm;
    pair.leakage = detail::leakage_fraction(full);
    pair.vector = std::move(full);
    out.push_back(std::move(pair));
  }
  return out;
}

/// Largest relative residual of the s-equation for the closed-form psi_n at
/// 50 Chebyshev points in (0.02, 0.98).
inline double residual_scan(const ModelParams& p, const BoundState& st) {
  const HypergeometricForm f = assemble_ode(p, st.energy);
  PowerExpFactor factor;
  factor.cls = SigmaClass::jacobi;
  factor.root_left = 0.0;
  factor.root_right = 1.0;
  factor.exp_left = st.exponent_left;
  factor.exp_right = st.exponent_right;
  const JacobiSolution y{st.n, st.jacobi_a, st.jacobi_b, 0.0, 1.0};
  constexpr int points = 50;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double s =
        0.5 + 0.48 * std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * points));
    worst = std::max(worst, standard_form_residual(f.sigma(), f.tau_tilde(), f.sigma_tilde(),
                                                   factor, y, s));
  }
  return worst;
}

struct ConvergenceLevel {
  int n = 0;
  std::vector<double> spacing;
  std::vector<double> eigenvalue;
  double extrapolated = 0.0;    // Richardson on the two finest grids, order 2
  double error_estimate = 0.0;  // |extrapolated - finest|
  double observed_order = 0.0;  // from the three finest grids
  double max_leakage = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceLevel> levels;
  std::vector<int> accepted_per_grid;
  bool leakage_warning = false;  // some eigenpair was rejected as leaky
};

struct ConvergenceOptions {
  LeftClosure closure = LeftClosure::dirichlet;
  double threshold = 0.0;
  int max_levels = 16;
  double leakage_tol = 1e-8;
};

/// Eigenvalues on >= 3 ratio-2 grids, Richardson extrapolation and observed
/// order per level. Eigenpairs with leakage above tolerance are excluded.
inline ConvergenceTable convergence_study(const ModelParams& p, const std::vector<GridSpec>& grids,
                                          const ConvergenceOptions& opts = {}) {
  if (grids.size() < 3) throw std::invalid_argument("convergence study needs >= 3 grids");
  for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
    const double ratio = grids[i].h() / grids[i + 1].h();
    if (std::fabs(ratio - 2.0) > 1e-9)
      throw std::invalid_argument("convergence study needs ratio-2 refinement");
  }

  std::vector<std::future<std::vector<OracleEigenpair>>> jobs;
  for (const GridSpec& g : grids)
    jobs.push_back(std::async(std::launch::async, [&p, g, &opts] {
      return eigenvalues_below(discretize(p, g, opts.closure), opts.threshold, opts.max_levels);
    }));

  ConvergenceTable table;
  std::vector<std::vector<OracleEigenpair>> accepted(grids.size());
  for (std::size_t gi = 0; gi < grids.size(); ++gi) {
    for (auto& pair : jobs[gi].get()) {
      if (pair.leakage > opts.leakage_tol) {
        table.leakage_warning = true;
        continue;
      }
      accepted[gi].push_back(std::move(pair));
    }
    table.accepted_per_grid.push_back(static_cast<int>(accepted[gi].size()));
  }

  std::size_t levels = accepted[0].size();
  for (const auto& a : accepted) levels = std::min(levels, a.size());
  const std::size_t last = grids.size() - 1;
  for (std::size_t n = 0; n < levels; ++n) {
    ConvergenceLevel lv;
    lv.n = static_cast<int>(n);
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
      lv.spacing.push_back(grids[gi].h());
      lv.eigenvalue.push_back(accepted[gi][n].eigenvalue);
      lv.max_leakage = std::max(lv.max_leakage, accepted[gi][n].leakage);
    }
    const double e1 = lv.eigenvalue[last - 2], e2 = lv.eigenvalue[last - 1], e3 = lv.eigenvalue[last];
    lv.extrapolated = (4.0 * e3 - e2) / 3.0;
    lv.error_estimate = std::fabs(lv.extrapolated - e3);
    const double num = e1 - e2, den = e2 - e3;
    lv.observed_order = (den != 0.0 && num / den > 0.0)
                            ? std::log2(num / den)
                            : std::numeric_limits<double>::quiet_NaN();
    table.levels.push_back(std::move(lv));
  }
  return table;
}

/// Three ratio-2 grids over [x_min, x_max] whose finest has at most
/// `finest.n_points` nodes.
inline std::vector<GridSpec> refinement_ladder(const GridSpec& finest) {
  finest.validate();
  const int intervals = finest.intervals() - finest.intervals() % 4;
  if (intervals < 8) throw std::invalid_argument("grid too coarse for a refinement ladder");
  return {{finest.x_min, finest.x_max, intervals / 4 + 1},
          {finest.x_min, finest.x_max, intervals / 2 + 1},
          {finest.x_min, finest.x_max, intervals + 1}};
}

struct DomainFit {
  GridSpec grid;
  bool contained = false;  // leakage below tolerance for the requested levels
  int growth_steps = 0;
};

/// Widens the grid (keeping the spacing) until the lowest `levels`
/// eigenvectors have leakage below tolerance, up to `max_steps` times.
inline DomainFit fit_domain(const ModelParams& p, GridSpec g, int levels, LeftClosure closure,
                            double leakage_tol = 1e-8, int max_steps = 4) {
  DomainFit fit{g, false, 0};
  const double h = g.h();
  for (int step = 0;; ++step) {
    const auto pairs = eigenvalues_below(discretize(p, fit.grid, closure), 0.0, levels);
    bool ok = true;
    for (const auto& pr : pairs) ok = ok && pr.leakage <= leakage_tol;
    if (ok) {
      fit.contained = true;
      return fit;
    }
    if (step == max_steps) return fit;
    const double centre = 0.5 * (fit.grid.x_min + fit.grid.x_max);
    const double half = 0.75 * (fit.grid.x_max - fit.grid.x_min);
    double lo = centre - half;
    if (p.regime() == Regime::half_line)
      lo = fit.grid.x_min;
    else
      lo = std::max(lo, -600.0 / p.lambda());
    const double hi = centre + half;
    fit.grid = {lo, hi, static_cast<int>(std::lround((hi - lo) / h)) + 1};
    fit.growth_steps = step + 1;
  }
}

}  // namespace pdmnu
