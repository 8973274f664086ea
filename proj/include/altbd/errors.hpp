#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace altbd {

/// An argument lies outside the domain of the function (non-finite input,
/// non-positive rate, pole of a hypergeometric parameter, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An infinite series hit its term cap before meeting the tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial_sum, std::size_t terms)
      : std::runtime_error(what + " (partial sum " + std::to_string(partial_sum) + " after " +
                           std::to_string(terms) + " terms)"),
        partial_sum_(partial_sum),
        terms_(terms) {}

  double partial_sum() const noexcept { return partial_sum_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double partial_sum_;
  std::size_t terms_;
};

/// Adaptive quadrature could not reach the requested absolute tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) + ", error " +
                           std::to_string(error) + ")"),
        estimate_(estimate),
        error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// Too much probability mass reached the edge of a truncated state window.
class WindowTooSmall : public std::runtime_error {
 public:
  WindowTooSmall(const std::string& what, double lost_mass)
      : std::runtime_error(what + " (lost mass " + std::to_string(lost_mass) + ")"),
        lost_mass_(lost_mass) {}

  double lost_mass() const noexcept { return lost_mass_; }

 private:
  double lost_mass_;
};

}  // namespace altbd
