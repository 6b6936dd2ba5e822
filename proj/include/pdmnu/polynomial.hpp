#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace pdmnu {

/// Real polynomial of degree <= 2, coefficients in ascending order.
class Polynomial {
 public:
  static constexpr int max_degree = 2;

  constexpr Polynomial() = default;

  Polynomial(std::initializer_list<double> coeffs) {
    int i = 0;
    for (double c : coeffs) {
      if (i > max_degree) {
        if (c != 0.0) throw std::invalid_argument("polynomial degree exceeds 2");
        continue;
      }
      c_[static_cast<std::size_t>(i++)] = c;
    }
  }

  static Polynomial constant(double c0) { return {c0}; }
  static Polynomial linear(double c0, double c1) { return {c0, c1}; }
  static Polynomial quadratic(double c0, double c1, double c2) { return {c0, c1, c2}; }

  /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const {
    for (int i = max_degree; i >= 0; --i)
      if (c_[static_cast<std::size_t>(i)] != 0.0) return i;
    return -1;
  }

  bool is_zero() const { return degree() < 0; }

  double operator[](int i) const {
    return (i < 0 || i > max_degree) ? 0.0 : c_[static_cast<std::size_t>(i)];
  }

  double operator()(double s) const { return (c_[2] * s + c_[1]) * s + c_[0]; }

  Polynomial derivative() const { return {c_[1], 2.0 * c_[2]}; }

  /// Leading-order slope, i.e. the constant first derivative of a degree <= 1
  /// polynomial.
  double slope() const { return c_[1]; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    return {a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2]};
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return {a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2]};
  }
  friend Polynomial operator*(double k, const Polynomial& a) {
    return {k * a.c_[0], k * a.c_[1], k * a.c_[2]};
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.degree() + b.degree() > max_degree && !a.is_zero() && !b.is_zero())
      throw std::invalid_argument("polynomial product exceeds degree 2");
    Polynomial r;
    for (int i = 0; i <= max_degree; ++i)
      for (int j = 0; i + j <= max_degree; ++j)
        r.c_[static_cast<std::size_t>(i + j)] += a[i] * b[j];
    return r;
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Human-readable form, e.g. "1 - 7.403124 s".
  std::string to_string(int digits = 7) const {
    std::string out;
    static constexpr const char* suffix[] = {"", " s", " s^2"};
    for (int i = 0; i <= max_degree; ++i) {
      const double c = c_[static_cast<std::size_t>(i)];
      if (c == 0.0) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*g", digits, std::fabs(c));
      if (out.empty())
        out += (c < 0 ? "-" : "");
      else
        out += (c < 0 ? " - " : " + ");
      out += buf;
      out += suffix[i];
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::array<double, 3> c_{};
};

}  // namespace pdmnu
