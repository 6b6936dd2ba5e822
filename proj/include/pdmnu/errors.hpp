#pragma once

#include <stdexcept>
#include <string>

namespace pdmnu {

/// A coordinate outside the physical domain 1 - q e^{-lambda x} > 0, or an s
/// value outside the image interval of the coordinate map.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double abscissa)
      : std::domain_error(what), abscissa_(abscissa) {}

  /// For q > 0 this is the singular point x_s = ln(q)/lambda; otherwise the
  /// offending input.
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Raised when a square root in the closed-form spectrum would need a negative
/// argument (mu_sq < 0 or 1 + 4 gamma < 0).
class ComplexParameterError : public std::domain_error {
 public:
  ComplexParameterError(std::string quantity, double value)
      : std::domain_error("complex parameter: " + quantity + " = " +
                          std::to_string(value) + " < 0"),
        quantity_(std::move(quantity)),
        value_(value) {}

  const std::string& quantity() const noexcept { return quantity_; }
  double value() const noexcept { return value_; }

 private:
  std::string quantity_;
  double value_;
};

class NoRealBranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedSigmaClass : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnphysicalStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Composite quadrature hit its panel cap before two successive estimates
/// agreed.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace pdmnu
