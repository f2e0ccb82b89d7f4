#pragma once

#include <stdexcept>
#include <string>

namespace fracwave {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an adaptive or product-integration scheme fails to deliver a finite
/// result within its budget.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Order of a fractional operator, restricted to 0 < alpha <= 1.
///
/// The value is stored exactly as given; `FractionalOrder{1.0}.is_classical()` holds
/// without any epsilon comparison.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);

  [[nodiscard]] double value() const noexcept { return alpha_; }
  [[nodiscard]] bool is_classical() const noexcept { return alpha_ == 1.0; }

  friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

 private:
  double alpha_;
};

/// Absolute/relative acceptance pair. A result passes when its error estimate is
/// below max(abs_tol, rel_tol * |value|).
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;

  Tolerance() = default;
  Tolerance(double abs, double rel);

  [[nodiscard]] double bound_for(double value) const noexcept;
  [[nodiscard]] bool accepts(double error, double value) const noexcept {
    return error <= bound_for(value);
  }
};

/// Gamma function for real z > 0 (Lanczos approximation, relative error below 1e-13
/// on (0, 30]).
double gamma(double z);

/// Coefficient of the power rule d^a/dx^a x^b = Gamma(b+1)/Gamma(b+1-a) x^(b-a).
double euler_power_coefficient(double beta, FractionalOrder order);

}  // namespace fracwave
