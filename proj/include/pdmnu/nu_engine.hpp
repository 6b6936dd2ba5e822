#pragma once

// Nikiforov-Uvarov reduction of
//   psi'' + (tau_tilde / sigma) psi' + (sigma_tilde / sigma^2) psi = 0
// with deg sigma <= 2, deg tau_tilde <= 1, deg sigma_tilde <= 2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pdmnu/errors.hpp"
#include "pdmnu/polynomial.hpp"
#include "pdmnu/specfun.hpp"

namespace pdmnu {

class HypergeometricForm {
 public:
  HypergeometricForm(Polynomial sigma, Polynomial tau_tilde, Polynomial sigma_tilde)
      : sigma_(sigma), tau_tilde_(tau_tilde), sigma_tilde_(sigma_tilde) {
    if (sigma_.is_zero()) throw std::invalid_argument("sigma must not vanish identically");
    if (tau_tilde_.degree() > 1) throw std::invalid_argument("tau_tilde must have degree <= 1");
  }

  const Polynomial& sigma() const { return sigma_; }
  const Polynomial& tau_tilde() const { return tau_tilde_; }
  const Polynomial& sigma_tilde() const { return sigma_tilde_; }

  /// (sigma' - tau_tilde)/2, the k-independent part of pi.
  Polynomial half_gap() const { return 0.5 * (sigma_.derivative() - tau_tilde_); }

  /// (sigma' - tau_tilde)^2/4 - sigma_tilde + k sigma
  Polynomial under_root(double k) const {
    const Polynomial g = half_gap();
    return g * g - sigma_tilde_ + k * sigma_;
  }

 private:
  Polynomial sigma_;
  Polynomial tau_tilde_;
  Polynomial sigma_tilde_;
};

struct NuBranch {
  double k = 0.0;
  Polynomial pi;
  Polynomial tau;
  double tau_prime = 0.0;
  double lambda_of_k = 0.0;
  bool admissible = false;
  int k_index = 0;  // which root of the perfect-square condition
  int sign = +1;    // sign in front of the square root
  double discriminant = 0.0;  // of the under-root quadratic at this k
};

/// Discriminant c1^2 - 4 c0 c2 of a quadratic.
inline double discriminant(const Polynomial& p) { return p[1] * p[1] - 4.0 * p[0] * p[2]; }

enum class SigmaClass { hermite, laguerre, jacobi };

inline const char* to_string(SigmaClass c) {
  switch (c) {
    case SigmaClass::hermite: return "hermite";
    case SigmaClass::laguerre: return "laguerre";
    case SigmaClass::jacobi: return "jacobi";
  }
  return "?";
}

struct SigmaShape {
  SigmaClass cls;
  double lead;        // constant, slope, or s^2 coefficient
  double root_left;   // laguerre: the root; jacobi: smaller root
  double root_right;  // jacobi: larger root
};

inline SigmaShape classify_sigma(const Polynomial& sigma) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (sigma.degree()) {
    case 0: return {SigmaClass::hermite, sigma[0], nan, nan};
    case 1: return {SigmaClass::laguerre, sigma[1], -sigma[0] / sigma[1], nan};
    case 2: {
      const double d = discriminant(sigma);
      if (!(d > 0.0))
        throw UnsupportedSigmaClass("sigma = " + sigma.to_string() +
                                    " has no pair of distinct real roots");
      const double sq = std::sqrt(d);
      // Stable quadratic roots.
      const double t = -0.5 * (sigma[1] + std::copysign(sq, sigma[1]));
      double r1 = t / sigma[2];
      double r2 = t != 0.0 ? sigma[0] / t : -r1;
      if (r1 > r2) std::swap(r1, r2);
      return {SigmaClass::jacobi, sigma[2], r1, r2};
    }
    default: break;
  }
  throw UnsupportedSigmaClass("sigma must be nonzero");
}

namespace detail {

// Values of k for which the under-root quadratic has zero discriminant.
// Its coefficients are affine in k, so the condition is quadratic in k.
inline std::vector<double> perfect_square_ks(const HypergeometricForm& f) {
  const Polynomial base = f.under_root(0.0);
  const Polynomial& slope = f.sigma();
  const double a0 = base[0], a1 = base[1], a2 = base[2];
  const double b0 = slope[0], b1 = slope[1], b2 = slope[2];
  const double k2 = b1 * b1 - 4.0 * b0 * b2;
  const double k1 = 2.0 * a1 * b1 - 4.0 * (a0 * b2 + b0 * a2);
  const double k0 = a1 * a1 - 4.0 * a0 * a2;
  const double scale = std::fabs(k2) + std::fabs(k1) + std::fabs(k0);
  const double eps = 1e-14 * (scale > 0.0 ? scale : 1.0);

  if (std::fabs(k2) <= eps) {
    if (std::fabs(k1) <= eps) {
      if (std::fabs(k0) <= eps)
        throw NoRealBranchError("perfect-square condition holds for every k; "
                                "the form has no discrete spectrum");
      throw NoRealBranchError("perfect-square condition has no solution in k");
    }
    return {-k0 / k1};
  }
  double d = k1 * k1 - 4.0 * k2 * k0;
  if (d < 0.0) {
    if (d < -1e-10 * (k1 * k1 + 4.0 * std::fabs(k2 * k0)))
      throw NoRealBranchError("perfect-square condition has only complex k");
    d = 0.0;
  }
  if (d == 0.0) return {-k1 / (2.0 * k2)};
  const double t = -0.5 * (k1 + std::copysign(std::sqrt(d), k1));
  double r1 = t / k2;
  double r2 = k0 / t;
  if (r1 > r2) std::swap(r1, r2);
  if (std::fabs(r2 - r1) <= 1e-12 * std::max(std::fabs(r1), std::fabs(r2)))
    return {0.5 * (r1 + r2)};
  return {r1, r2};
}

// Square root of the under-root polynomial as a polynomial of degree <= 1,
// or nothing when it is not the square of a real polynomial.
inline std::optional<Polynomial> polynomial_sqrt(const Polynomial& p, double scale) {
  const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
  if (p[2] > tol) {
    const double r = std::sqrt(p[2]);
    return Polynomial::linear(p[1] / (2.0 * r), r);
  }
  if (std::fabs(p[2]) <= tol) {
    if (std::fabs(p[1]) > std::sqrt(tol)) return std::nullopt;
    if (p[0] < -tol) return std::nullopt;
    return Polynomial::constant(std::sqrt(std::max(p[0], 0.0)));
  }
  return std::nullopt;
}

}  // namespace detail

/// All real (k, pi) pairs that make the under-root expression a perfect
/// square, each with both signs of the root. Coincident k roots or a vanishing
/// root collapse into a single branch.
inline std::vector<NuBranch> candidate_branches(const HypergeometricForm& f) {
  const auto ks = detail::perfect_square_ks(f);
  const Polynomial g = f.half_gap();
  std::vector<NuBranch> out;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    const double k = ks[ki];
    const Polynomial p = f.under_root(k);
    const Polynomial base = f.under_root(0.0);
    const double scale = std::fabs(base[2]) + std::fabs(k * f.sigma()[2]) +
                         std::fabs(base[1]) + std::fabs(base[0]) + std::fabs(k);
    const auto root = detail::polynomial_sqrt(p, scale);
    if (!root) continue;
    const int signs = root->is_zero() ? 1 : 2;
    for (int si = 0; si < signs; ++si) {
      const int sign = si == 0 ? +1 : -1;
      NuBranch b;
      b.k = k;
      b.k_index = static_cast<int>(ki);
      b.sign = sign;
      b.pi = g + static_cast<double>(sign) * (*root);
      b.tau = f.tau_tilde() + 2.0 * b.pi;
      b.tau_prime = b.tau.slope();
      b.lambda_of_k = k + b.pi.slope();
      b.admissible = b.tau_prime < 0.0;
      b.discriminant = discriminant(p);
      out.push_back(b);
    }
  }
  if (out.empty())
    throw NoRealBranchError("no real k makes the under-root polynomial a perfect square");
  return out;
}

struct BranchSelection {
  std::size_t index;
  std::string rule;  // which criterion decided
};

namespace detail {

inline bool tau_zero_inside(const NuBranch& b, const SigmaShape& shape) {
  if (b.tau.slope() == 0.0) return false;
  const double root = -b.tau[0] / b.tau.slope();
  switch (shape.cls) {
    case SigmaClass::hermite: return true;
    case SigmaClass::laguerre:
      return shape.lead > 0.0 ? root > shape.root_left : root < shape.root_left;
    case SigmaClass::jacobi: return root > shape.root_left && root < shape.root_right;
  }
  return false;
}

}  // namespace detail

/// Physical branch: tau' < 0. Ties are broken by (1) the zero of tau lying
/// inside sigma's natural interval, (2) the most negative tau', (3) smaller |k|.
inline std::optional<BranchSelection> select_physical(const std::vector<NuBranch>& branches,
                                                      const HypergeometricForm& f) {
  const SigmaShape shape = classify_sigma(f.sigma());
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (branches[i].admissible) pool.push_back(i);
  if (pool.empty()) return std::nullopt;
  if (pool.size() == 1) return BranchSelection{pool[0], "unique tau' < 0"};

  auto narrow = [&](auto&& better) {
    std::vector<std::size_t> kept;
    for (std::size_t i : pool) {
      bool dominated = false;
      for (std::size_t j : pool)
        if (better(branches[j], branches[i])) { dominated = true; break; }
      if (!dominated) kept.push_back(i);
    }
    const bool decided = kept.size() == 1;
    pool = std::move(kept);
    return decided;
  };

  if (narrow([&](const NuBranch& a, const NuBranch& b) {
        return detail::tau_zero_inside(a, shape) && !detail::tau_zero_inside(b, shape);
      }))
    return BranchSelection{pool[0], "zero of tau inside sigma interval"};
  if (narrow([](const NuBranch& a, const NuBranch& b) {
        return a.tau_prime < b.tau_prime - 1e-12 * std::fabs(b.tau_prime);
      }))
    return BranchSelection{pool[0], "most negative tau'"};
  narrow([](const NuBranch& a, const NuBranch& b) {
    return std::fabs(a.k) < std::fabs(b.k) - 1e-12 * std::fabs(b.k);
  });
  return BranchSelection{pool[0], "smaller |k|"};
}

/// lambda_n = -n tau' - n (n - 1)/2 sigma''
inline double eigenvalue_rule(const NuBranch& b, const HypergeometricForm& f, int n) {
  const double sigma2 = 2.0 * f.sigma()[2];
  const double nn = n;
  return -nn * b.tau_prime - 0.5 * nn * (nn - 1.0) * sigma2;
}

/// |s - r1|^{e1} |s - r2|^{e2} exp(Q(s)); which roots are present depends on
/// the sigma class.
struct PowerExpFactor {
  SigmaClass cls = SigmaClass::jacobi;
  double root_left = 0.0;
  double root_right = 0.0;
  double exp_left = 0.0;
  double exp_right = 0.0;
  Polynomial exponent;

  bool has_left() const { return cls != SigmaClass::hermite; }
  bool has_right() const { return cls == SigmaClass::jacobi; }

  double operator()(double s) const {
    double v = std::exp(exponent(s));
    if (has_left()) v *= std::pow(std::fabs(s - root_left), exp_left);
    if (has_right()) v *= std::pow(std::fabs(s - root_right), exp_right);
    return v;
  }

  double log_derivative(double s) const {
    double v = exponent.derivative()(s);
    if (has_left()) v += exp_left / (s - root_left);
    if (has_right()) v += exp_right / (s - root_right);
    return v;
  }

  double log_derivative_prime(double s) const {
    double v = exponent.derivative().derivative()(s);
    if (has_left()) v -= exp_left / ((s - root_left) * (s - root_left));
    if (has_right()) v -= exp_right / ((s - root_right) * (s - root_right));
    return v;
  }
};

using WeightSolution = PowerExpFactor;

namespace detail {

// Closed form of exp(integral of numerator/sigma).
inline PowerExpFactor integrate_ratio(const Polynomial& numerator, const SigmaShape& shape) {
  PowerExpFactor out;
  out.cls = shape.cls;
  switch (shape.cls) {
    case SigmaClass::hermite:
      out.exponent = Polynomial::quadratic(0.0, numerator[0] / shape.lead,
                                           0.5 * numerator[1] / shape.lead);
      break;
    case SigmaClass::laguerre:
      out.root_left = shape.root_left;
      out.exp_left = numerator(shape.root_left) / shape.lead;
      out.exponent = Polynomial::linear(0.0, numerator[1] / shape.lead);
      break;
    case SigmaClass::jacobi: {
      const double r1 = shape.root_left, r2 = shape.root_right, c = shape.lead;
      out.root_left = r1;
      out.root_right = r2;
      out.exp_left = numerator(r1) / (c * (r1 - r2));
      out.exp_right = numerator(r2) / (c * (r2 - r1));
      break;
    }
  }
  return out;
}

}  // namespace detail

/// rho solving (sigma rho)' = tau rho.
inline WeightSolution weight_function(const NuBranch& b, const HypergeometricForm& f) {
  return detail::integrate_ratio(b.tau - f.sigma().derivative(), classify_sigma(f.sigma()));
}

/// phi with phi'/phi = pi/sigma.
inline PowerExpFactor phi_factor(const NuBranch& b, const HypergeometricForm& f) {
  return detail::integrate_ratio(b.pi, classify_sigma(f.sigma()));
}

/// y_n = P_n^{(a,b)}(u), u = 1 - 2 (s - r1)/(r2 - r1); the Rodrigues constant
/// B_n is left to the caller.
struct JacobiSolution {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
  double root_left = 0.0;
  double root_right = 1.0;

  double argument(double s) const {
    return 1.0 - 2.0 * (s - root_left) / (root_right - root_left);
  }
  double du_ds() const { return -2.0 / (root_right - root_left); }

  double operator()(double s) const { return jacobi_eval({n, a, b}, argument(s)); }
  double derivative(double s) const {
    return jacobi_derivative({n, a, b}, argument(s), 1) * du_ds();
  }
  double second_derivative(double s) const {
    return jacobi_derivative({n, a, b}, argument(s), 2) * du_ds() * du_ds();
  }
};

inline JacobiSolution rodrigues_solution(const NuBranch& br, const HypergeometricForm& f, int n) {
  const SigmaShape shape = classify_sigma(f.sigma());
  if (shape.cls != SigmaClass::jacobi)
    throw UnsupportedSigmaClass(std::string("Rodrigues descriptor needs a Jacobi-class sigma, got ") +
                                to_string(shape.cls));
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  const WeightSolution rho = weight_function(br, f);
  JacobiSolution y{n, rho.exp_left, rho.exp_right, shape.root_left, shape.root_right};
  JacobiParams{n, y.a, y.b}.validate();
  return y;
}

/// |psi'' + (tau_tilde/sigma) psi' + (sigma_tilde/sigma^2) psi| for
/// psi = phi y, divided by the largest of the three terms. phi cancels, so
/// the result is insensitive to its magnitude.
inline double standard_form_residual(const Polynomial& sigma, const Polynomial& tau_tilde,
                                     const Polynomial& sigma_tilde, const PowerExpFactor& phi,
                                     const JacobiSolution& y, double s) {
  const double g = phi.log_derivative(s);
  const double gp = phi.log_derivative_prime(s);
  const double y0 = y(s), y1 = y.derivative(s), y2 = y.second_derivative(s);
  const double d1 = g * y0 + y1;
  const double d2 = (g * g + gp) * y0 + 2.0 * g * y1 + y2;
  const double sig = sigma(s);
  const double t1 = d2;
  const double t2 = tau_tilde(s) / sig * d1;
  const double t3 = sigma_tilde(s) / (sig * sig) * y0;
  const double scale = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
  if (scale == 0.0) return 0.0;
  return std::fabs(t1 + t2 + t3) / scale;
}

/// Residual of psi_n = phi y_n in the standard-form equation with
/// sigma_tilde shifted by (lambda_n - lambda(k)) sigma, which makes the
/// branch's lambda equal to lambda_n.
inline double quantized_residual(const HypergeometricForm& f, const NuBranch& b, int n, double s) {
  const double shift = eigenvalue_rule(b, f, n) - b.lambda_of_k;
  return standard_form_residual(f.sigma(), f.tau_tilde(), f.sigma_tilde() + shift * f.sigma(),
                                phi_factor(b, f), rodrigues_solution(b, f, n), s);
}

}  // namespace pdmnu
