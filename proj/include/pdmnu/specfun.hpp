#pragma once

// Jacobi polynomials and Gauss-Legendre quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmnu/errors.hpp"

namespace pdmnu {

struct JacobiParams {
  int n = 0;
  double a = 0.0;
  double b = 0.0;

  void validate() const {
    if (n < 0) throw std::invalid_argument("Jacobi degree must be >= 0");
    if (!(a > -1.0) || !(b > -1.0))
      throw std::invalid_argument("Jacobi parameters must satisfy a, b > -1 (a = " +
                                  std::to_string(a) + ", b = " + std::to_string(b) + ")");
  }
};

/// P_n^{(a,b)}(u) by the three-term recurrence in n.
inline double jacobi_eval(const JacobiParams& jp, double u) {
  jp.validate();
  const double a = jp.a, b = jp.b;
  if (jp.n == 0) return 1.0;
  double p_prev = 1.0;
  double p = (a + 1.0) + 0.5 * (a + b + 2.0) * (u - 1.0);
  for (int k = 2; k <= jp.n; ++k) {
    const double n = k;
    const double s = 2.0 * n + a + b;
    const double c0 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c1 = (s - 1.0) * (s * (s - 2.0) * u + a * a - b * b);
    const double c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    const double next = (c1 * p - c2 * p_prev) / c0;
    p_prev = p;
    p = next;
  }
  return p;
}

/// d^order/du^order P_n^{(a,b)}(u), using
/// d/du P_n^{(a,b)} = (n + a + b + 1)/2 P_{n-1}^{(a+1,b+1)}.
inline double jacobi_derivative(const JacobiParams& jp, double u, int order = 1) {
  jp.validate();
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (order > jp.n) return 0.0;
  double factor = 1.0;
  for (int j = 1; j <= order; ++j) factor *= 0.5 * (jp.n + jp.a + jp.b + j);
  return factor * jacobi_eval({jp.n - order, jp.a + order, jp.b + order}, u);
}

/// Sign changes of P_n^{(a,b)} on a dense grid over the open interval (lo, hi).
inline int jacobi_nodes_count(const JacobiParams& jp, double lo = -1.0, double hi = 1.0) {
  jp.validate();
  const int samples = std::max(4000, 400 * (jp.n + 1));
  int changes = 0;
  double prev = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double u = lo + (hi - lo) * i / samples;
    const double v = jacobi_eval(jp, u);
    if (v == 0.0) continue;
    if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++changes;
    prev = v;
  }
  return changes;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
class QuadratureRule {
 public:
  static QuadratureRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
    QuadratureRule rule;
    if (order == 1) {
      rule.nodes_ = {0.0};
      rule.weights_ = {2.0};
      return rule;
    }
    rule.nodes_.resize(static_cast<std::size_t>(order));
    rule.weights_.resize(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      double dp = 1.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= order; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      // Weight from the converged node.
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      const auto lo = static_cast<std::size_t>(i);
      const auto hi = static_cast<std::size_t>(order - 1 - i);
      rule.nodes_[lo] = -x;
      rule.nodes_[hi] = x;
      rule.weights_[lo] = w;
      rule.weights_[hi] = w;
    }
    return rule;
  }

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Single application of the rule mapped to [a, b].
  template <class F>
  double apply(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct IntegrationOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_panels = 1 << 14;
};

/// Composite Gauss-Legendre with panel doubling; stops when two successive
/// estimates agree to rel_tol (or abs_tol near zero).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureRule& rule,
                 const IntegrationOptions& opts = {}) {
  auto composite = [&](int panels) {
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k)
      sum += rule.apply(f, a + k * width, a + (k + 1) * width);
    return sum;
  };
  double prev = composite(1);
  double before = prev;
  for (int panels = 2; panels <= opts.max_panels; panels *= 2) {
    const double cur = composite(panels);
    if (std::fabs(cur - prev) <= opts.rel_tol * std::fabs(cur) + opts.abs_tol) return cur;
    before = prev;
    prev = cur;
  }
  throw NonConvergenceError("quadrature did not converge within the panel cap", before, prev);
}

template <class F>
double integrate(F&& f, double a, double b, const IntegrationOptions& opts = {}) {
  static const QuadratureRule rule = QuadratureRule::gauss_legendre(20);
  return integrate(std::forward<F>(f), a, b, rule, opts);
}

}  // namespace pdmnu
