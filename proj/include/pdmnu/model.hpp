#pragma once

// Hulthen potential with the matching position-dependent mass
// m(x) = 1 / (1 - q e^{-lambda x}), in units hbar = 2 m0 = 1.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pdmnu/errors.hpp"

namespace pdmnu {

/// q < 0: mass positive on the whole real line, s in (0, 1).
/// q > 0: domain x > ln(q)/lambda, s in (1, inf). Not checked against the
/// closed form.
enum class Regime { full_line, half_line };

class ModelParams {
 public:
  ModelParams(double v0, double lambda, double q, double alpha, double beta,
              double eta)
      : v0_(v0), lambda_(lambda), q_(q), alpha_(alpha), beta_(beta), eta_(eta) {
    if (!std::isfinite(v0) || !std::isfinite(lambda) || !std::isfinite(q) ||
        !std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(eta))
      throw std::invalid_argument("model parameters must be finite");
    if (!(lambda > 0.0))
      throw std::invalid_argument("lambda must be > 0");
    if (q == 0.0)
      throw std::invalid_argument("q must be nonzero");
  }

  double v0() const { return v0_; }
  double lambda() const { return lambda_; }
  double q() const { return q_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double eta() const { return eta_; }

  ModelParams with_eta(double eta) const {
    return {v0_, lambda_, q_, alpha_, beta_, eta};
  }

  /// A* = alpha (alpha + beta + 1) + beta + 1
  double a_star() const { return alpha_ * (alpha_ + beta_ + 1.0) + beta_ + 1.0; }
  /// z = (1 - 2 eta) / 2
  double z() const { return 0.5 - eta_; }

  // Shorthands of the transformed equation.
  double b_term() const { return eta_ * (eta_ - 2.0) + a_star(); }
  double c_term() const { return 0.5 * (beta_ + 1.0) - eta_; }
  double v_term() const { return v0_ / (q_ * lambda_ * lambda_); }

  /// xi3 + z^2 written without eta: 1/4 + (beta + 1)/2 - A*.
  double mu_sq() const { return 0.25 + 0.5 * (beta_ + 1.0) - a_star(); }
  /// xi1 + z (z - 1) written without eta: beta + 3/4 - A* - V0/(q lambda^2).
  double gamma() const { return beta_ + 0.75 - a_star() - v_term(); }

  Regime regime() const { return q_ < 0.0 ? Regime::full_line : Regime::half_line; }

  /// ln(q)/lambda for q > 0; -inf for q < 0.
  double singular_abscissa() const {
    return q_ > 0.0 ? std::log(q_) / lambda_
                    : -std::numeric_limits<double>::infinity();
  }

  bool in_domain(double x) const { return q_ < 0.0 || x > singular_abscissa(); }

 private:
  double v0_, lambda_, q_, alpha_, beta_, eta_;
};

namespace detail {

// Exponential pieces evaluated without 0/0 or overflow in either tail.
struct ExpTerms {
  double s;   // 1 / (1 - q e^{-lambda x})
  double es;  // e^{-lambda x} * s
};

inline ExpTerms exp_terms(const ModelParams& p, double x) {
  const double lx = p.lambda() * x;
  if (lx >= 0.0) {
    // Exact asymptote once the exponential is below any meaningful scale.
    const double e = lx > 700.0 ? 0.0 : std::exp(-lx);
    const double den = 1.0 - p.q() * e;
    if (!(den > 0.0))
      throw DomainError("x = " + std::to_string(x) +
                            " outside the physical domain (singular point x_s)",
                        p.singular_abscissa());
    return {1.0 / den, e / den};
  }
  const double t = std::exp(lx);
  const double den = t - p.q();
  if (!(den > 0.0))
    throw DomainError("x = " + std::to_string(x) +
                          " outside the physical domain (singular point x_s)",
                      p.singular_abscissa());
  return {t / den, 1.0 / den};
}

}  // namespace detail

/// m(x) = (1 - q e^{-lambda x})^{-1}
inline double mass_at(const ModelParams& p, double x) {
  return detail::exp_terms(p, x).s;
}

struct MassLogDerivatives {
  double first;   // m'/m
  double second;  // m''/m
};

inline MassLogDerivatives mass_log_derivatives(const ModelParams& p, double x) {
  const auto [s, es] = detail::exp_terms(p, x);
  const double ws = p.q() * es;  // q e^{-lambda x} / (1 - q e^{-lambda x})
  const double l = p.lambda();
  // m''/m = lambda^2 w (1 + w) s^2 with w s = ws, (1 + w) s = s + ws.
  return {-l * ws, l * l * ws * (s + ws)};
}

/// V(x) = -V0 e^{-lambda x} / (1 - q e^{-lambda x})
inline double potential_at(const ModelParams& p, double x) {
  return -p.v0() * detail::exp_terms(p, x).es;
}

/// V_eff = V + (beta + 1)/2 m''/m^2 - A* m'^2/m^3
inline double effective_potential_at(const ModelParams& p, double x) {
  const auto [s, es] = detail::exp_terms(p, x);
  const auto d = mass_log_derivatives(p, x);
  const double v = -p.v0() * es;
  return v + (0.5 * (p.beta() + 1.0) * d.second - p.a_star() * d.first * d.first) / s;
}

enum class SInterval { unit, above_one };

struct SCoordinate {
  double value;
  SInterval interval;
};

/// s = 1 / (1 - q e^{-lambda x}); numerically equal to m(x).
inline SCoordinate s_of_x(const ModelParams& p, double x) {
  return {detail::exp_terms(p, x).s,
          p.q() < 0.0 ? SInterval::unit : SInterval::above_one};
}

inline double x_of_s(const ModelParams& p, double s) {
  const bool ok = p.q() < 0.0 ? (s > 0.0 && s < 1.0) : (s > 1.0 && std::isfinite(s));
  if (!ok)
    throw DomainError("s = " + std::to_string(s) + " outside the image interval", s);
  // q e^{-lambda x} = (s - 1)/s
  return -std::log((s - 1.0) / (p.q() * s)) / p.lambda();
}

struct XiCoefficients {
  double xi1;
  double xi2;
  double xi3;
  double mu_sq;  // xi3 + z^2
  double gamma;  // xi1 + z (z - 1)

  /// xi1 - xi2 + xi3, equal to -E/lambda^2.
  double decay_sq() const { return xi1 - xi2 + xi3; }
};

/// Coefficients of the s-equation
///   psi'' + (2 eta - (2 eta + 1) s)/(s(1-s)) psi'
///         + (-xi1 s^2 + xi2 s - xi3)/(s^2 (1-s)^2) psi = 0.
inline XiCoefficients xi_coefficients(const ModelParams& p, double energy) {
  const double b = p.b_term();
  const double c = p.c_term();
  const double v = p.v_term();
  const double l2 = p.lambda() * p.lambda();
  const double z = p.z();
  XiCoefficients xi{};
  xi.xi1 = -(b - 2.0 * c + v);
  xi.xi2 = -2.0 * b + 3.0 * c - v + energy / l2;
  xi.xi3 = -(b - c);
  xi.mu_sq = xi.xi3 + z * z;
  xi.gamma = xi.xi1 + z * (z - 1.0);
  return xi;
}

}  // namespace pdmnu
