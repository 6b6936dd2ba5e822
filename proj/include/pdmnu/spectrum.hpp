#pragma once

// Bound states of the PDM Hulthen problem from the NU quantization condition
//   Lambda = sqrt(xi1 - xi2 + xi3) + sqrt(xi3 + z^2) = (-(2n+1) +- sqrt(1 + 4 gamma))/2
// together with xi1 - xi2 + xi3 = -E/lambda^2.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "pdmnu/errors.hpp"
#include "pdmnu/model.hpp"
#include "pdmnu/nu_engine.hpp"
#include "pdmnu/specfun.hpp"

namespace pdmnu {

enum class Case { one = 1, two = 2 };

struct QuantizationData {
  double Lambda = 0.0;
  double zeta = 0.0;  // NaN when no bound state exists for this n and case
  Case case_tag = Case::one;
  int n = 0;
};

namespace detail {

inline void require_real_spectrum(const ModelParams& p) {
  if (p.mu_sq() < 0.0) throw ComplexParameterError("mu_sq", p.mu_sq());
  const double g = 1.0 + 4.0 * p.gamma();
  if (g < 0.0) throw ComplexParameterError("1+4gamma", g);
}

inline double lambda_root(const ModelParams& p, int n, Case c) {
  const double root = std::sqrt(1.0 + 4.0 * p.gamma());
  const double lead = -(2.0 * n + 1.0);
  return 0.5 * (c == Case::one ? lead + root : lead - root);
}

inline void require_quantum_number(int n) {
  if (n < 0) throw std::invalid_argument("quantum number must be >= 0");
}

}  // namespace detail

/// sigma = s(1 - s), tau_tilde = 2 eta - (2 eta + 1) s,
/// sigma_tilde = -xi1 s^2 + xi2 s - xi3.
inline HypergeometricForm assemble_ode(const ModelParams& p, double energy) {
  const XiCoefficients xi = xi_coefficients(p, energy);
  const double eta = p.eta();
  return {Polynomial::quadratic(0.0, 1.0, -1.0),
          Polynomial::linear(2.0 * eta, -(2.0 * eta + 1.0)),
          Polynomial::quadratic(-xi.xi3, xi.xi2, -xi.xi1)};
}

/// E_n = -lambda^2 (Lambda_n - sqrt(mu_sq))^2 when Lambda_n - sqrt(mu_sq) > 0;
/// empty otherwise (threshold and Case 2 states are not bound). Independent
/// of eta.
inline std::optional<double> energy_level(const ModelParams& p, int n, Case c = Case::one) {
  detail::require_quantum_number(n);
  detail::require_real_spectrum(p);
  const double decay = detail::lambda_root(p, n, c) - std::sqrt(p.mu_sq());
  if (!(decay > 0.0)) return std::nullopt;
  return -p.lambda() * p.lambda() * decay * decay;
}

inline QuantizationData quantization(const ModelParams& p, int n, Case c = Case::one) {
  detail::require_quantum_number(n);
  detail::require_real_spectrum(p);
  QuantizationData out;
  out.Lambda = detail::lambda_root(p, n, c);
  out.case_tag = c;
  out.n = n;
  out.zeta = std::numeric_limits<double>::quiet_NaN();
  if (const auto e = energy_level(p, n, c)) {
    const XiCoefficients xi = xi_coefficients(p, *e);
    const double z2 = p.z() * p.z();
    const double arg = xi.xi3 * (xi.xi1 - xi.xi2 + xi.xi3 + z2) - z2 * (xi.xi2 - xi.xi1);
    out.zeta = std::sqrt(std::max(arg, 0.0));
  }
  return out;
}

struct PrintedEnergy {
  std::optional<double> value;
  std::string invalid_reason;  // set when value is empty

  bool valid() const { return value.has_value(); }
};

/// Literal evaluation of the two printed energy formulas
///   Case 1: -l^2/4 (2n+1 - sqrt(1+4g) - 2 sqrt(w))^2 - l^2 (eta - 1/2)^2
///   Case 2: +l^2/4 (2n+1 + sqrt(1+4g) + 2 sqrt(w))^2 - l^2 (eta - 1/2)^2
/// with w = -eta(eta-1) - A* + (beta+1)/2. Kept only as a comparison surface.
inline PrintedEnergy energy_level_as_printed(const ModelParams& p, int n, Case c = Case::one) {
  detail::require_quantum_number(n);
  const double eta = p.eta();
  const double inner = -eta * (eta - 1.0) - p.a_star() + 0.5 * (p.beta() + 1.0);
  const double g = 1.0 + 4.0 * p.gamma();
  if (inner < 0.0)
    return {std::nullopt, "inner root argument " + std::to_string(inner) + " < 0"};
  if (g < 0.0) return {std::nullopt, "1+4gamma = " + std::to_string(g) + " < 0"};
  const double l2 = p.lambda() * p.lambda();
  const double shift = l2 * (eta - 0.5) * (eta - 0.5);
  const double nn = 2.0 * n + 1.0;
  if (c == Case::one) {
    const double t = nn - std::sqrt(g) - 2.0 * std::sqrt(inner);
    return {-0.25 * l2 * t * t - shift, {}};
  }
  const double t = nn + std::sqrt(g) + 2.0 * std::sqrt(inner);
  return {0.25 * l2 * t * t - shift, {}};
}

/// Number of n >= 0 with Lambda_n - sqrt(mu_sq) > 0 (Case 1).
inline int bound_state_count(const ModelParams& p) {
  detail::require_real_spectrum(p);
  const double mu = std::sqrt(p.mu_sq());
  int count = 0;
  while (detail::lambda_root(p, count, Case::one) - mu > 0.0) ++count;
  return count;
}

struct BoundState {
  int n = 0;
  Case case_tag = Case::one;
  double energy = 0.0;
  double eta = 0.5;
  Regime regime = Regime::full_line;
  double jacobi_a = 0.0;        // 2 sqrt(xi3 + z^2)
  double jacobi_b = 0.0;        // 2 sqrt(xi1 - xi2 + xi3)
  double exponent_left = 0.0;   // z + sqrt(xi3 + z^2), power of s in psi
  double exponent_right = 0.0;  // sqrt(xi1 - xi2 + xi3), power of (1 - s)
  double norm_constant = std::numeric_limits<double>::quiet_NaN();  // > 0
  bool physical = false;        // printed exponent conditions
  bool normalizable = false;
};

struct PhysicalityVerdict {
  bool printed_rule = false;
  bool normalizable = false;
  std::string reason;

  bool physical() const { return printed_rule && normalizable; }
};

/// The two printed exponent conditions, plus square-integrability of
/// Phi = m^eta psi = s^{eta + left} (1 - s)^{right} P over dx = ds/(lambda s(1-s)).
inline PhysicalityVerdict physicality_check(const BoundState& st) {
  PhysicalityVerdict v;
  const double l = st.exponent_left, r = st.exponent_right;
  v.printed_rule = true;
  if (l < 0.0 && r > 0.0 && !(std::fabs(l) >= r)) {
    v.printed_rule = false;
    v.reason = "left exponent negative and |left| < right";
  } else if (r < 0.0 && l > 0.0 && !(std::fabs(r) >= l)) {
    v.printed_rule = false;
    v.reason = "right exponent negative and |right| < left";
  }
  if (st.regime == Regime::half_line) {
    v.normalizable = false;
    if (!v.reason.empty()) v.reason += "; ";
    v.reason += "half-line regime: normalizability not assessed";
    return v;
  }
  const bool left_ok = st.exponent_left + st.eta > 0.0;
  const bool right_ok = st.exponent_right > 0.0;
  v.normalizable = left_ok && right_ok;
  if (!left_ok) v.reason += (v.reason.empty() ? "" : "; ") + std::string("|Phi|^2 diverges at s -> 0");
  if (!right_ok) v.reason += (v.reason.empty() ? "" : "; ") + std::string("|Phi|^2 diverges at s -> 1");
  return v;
}

namespace detail {

// Unnormalized Phi(x) = s^{eta+left} (1-s)^{right} P_n^{(a,b)}(1 - 2s), q < 0.
inline double raw_phi(const ModelParams& p, const BoundState& st, double x) {
  const ExpTerms t = exp_terms(p, x);
  const double s = t.s;
  const double one_minus_s = -p.q() * t.es;
  return std::pow(s, st.eta + st.exponent_left) * std::pow(one_minus_s, st.exponent_right) *
         jacobi_eval({st.n, st.jacobi_a, st.jacobi_b}, 1.0 - 2.0 * s);
}

// Integration window where |Phi|^2 tails fall below ~e^{-50}.
inline std::pair<double, double> phi_window(const ModelParams& p, const BoundState& st) {
  const double centre = std::log(-p.q()) / p.lambda();
  const double left_rate = 2.0 * (st.eta + st.exponent_left) * p.lambda();
  const double right_rate = 2.0 * st.exponent_right * p.lambda();
  return {centre - 50.0 / left_rate, centre + 50.0 / right_rate};
}

inline double phi_norm_sq(const ModelParams& p, const BoundState& st) {
  const auto [lo, hi] = phi_window(p, st);
  const double centre = std::log(-p.q()) / p.lambda();
  auto f = [&](double x) {
    const double v = raw_phi(p, st, x);
    return v * v;
  };
  IntegrationOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 0.0;
  return integrate(f, lo, centre, opts) + integrate(f, centre, hi, opts);
}

}  // namespace detail

/// Closed-form bound state n of the requested case. Throws std::out_of_range
/// when the level is not bound.
inline BoundState bound_state(const ModelParams& p, int n, Case c = Case::one) {
  const auto e = energy_level(p, n, c);
  if (!e) throw std::out_of_range("no bound state with n = " + std::to_string(n));
  const XiCoefficients xi = xi_coefficients(p, *e);
  const double mu = std::sqrt(p.mu_sq());
  BoundState st;
  st.n = n;
  st.case_tag = c;
  st.energy = *e;
  st.eta = p.eta();
  st.regime = p.regime();
  st.jacobi_a = 2.0 * mu;
  st.exponent_right = std::sqrt(std::max(xi.decay_sq(), 0.0));
  st.jacobi_b = 2.0 * st.exponent_right;
  st.exponent_left = p.z() + mu;
  const PhysicalityVerdict v = physicality_check(st);
  st.physical = v.printed_rule;
  st.normalizable = v.normalizable;
  if (st.normalizable) st.norm_constant = 1.0 / std::sqrt(detail::phi_norm_sq(p, st));
  return st;
}

/// psi_n(s) and Phi_n(x) = m(x)^eta psi_n(s(x)), unit-normalized over x with
/// Phi_n > 0 as s -> 1-.
class Wavefunction {
 public:
  Wavefunction(const ModelParams& p, const BoundState& st) : p_(p), st_(st) {
    if (p.regime() != Regime::full_line)
      throw DomainError("closed-form wavefunction requires q < 0", p.singular_abscissa());
    const PhysicalityVerdict v = physicality_check(st);
    if (!v.printed_rule || !v.normalizable)
      throw UnphysicalStateError("state n = " + std::to_string(st.n) + " is unphysical: " + v.reason);
    sign_ = (st.n % 2 == 0) ? 1.0 : -1.0;
  }

  const BoundState& state() const { return st_; }

  /// Closed form without normalization.
  double psi_raw(double s) const {
    return std::pow(s, st_.exponent_left) * std::pow(1.0 - s, st_.exponent_right) *
           jacobi_eval({st_.n, st_.jacobi_a, st_.jacobi_b}, 1.0 - 2.0 * s);
  }

  double psi(double s) const { return sign_ * st_.norm_constant * psi_raw(s); }

  double phi(double x) const {
    return sign_ * st_.norm_constant * detail::raw_phi(p_, st_, x);
  }

  /// Integration window over x containing all but ~e^{-50} of |Phi|^2.
  std::pair<double, double> support() const { return detail::phi_window(p_, st_); }

 private:
  ModelParams p_;
  BoundState st_;
  double sign_ = 1.0;
};

}  // namespace pdmnu
