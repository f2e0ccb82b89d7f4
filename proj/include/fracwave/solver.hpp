#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracwave/core.hpp"
#include "fracwave/expr.hpp"
#include "fracwave/fracops.hpp"
#include "fracwave/transform.hpp"

namespace fracwave::solver {

/// Cauchy problem for the order-a (first-order kind) or order-2a wave equation on
/// x in [0, x_max], t in [0, t_max].
///
/// f and g are profiles of one abstract argument: the initial data are
/// u(x,0) = f(x^a/Gamma(1+a)) and D_t^a u(x,0) = g(x^a/Gamma(1+a)). Their arguments
/// inside the solution range over [k(X' - C T'), k(X' + C T')] and can be negative.
class WaveProblem {
 public:
  WaveProblem(FractionalOrder order, double speed, expr::Expression f, expr::Expression g, double x_max,
              double t_max, double p = 1.0, double q = 1.0);

  [[nodiscard]] FractionalOrder order() const noexcept { return transform_.order(); }
  [[nodiscard]] double speed() const noexcept { return speed_; }
  [[nodiscard]] const transform::TransformSpec& transform() const noexcept { return transform_; }
  [[nodiscard]] const expr::Expression& f() const noexcept { return f_; }
  [[nodiscard]] const expr::Expression& g() const noexcept { return g_; }
  [[nodiscard]] double x_max() const noexcept { return x_max_; }
  [[nodiscard]] double t_max() const noexcept { return t_max_; }

  /// c^a, the travelling speed in scaled coordinates.
  [[nodiscard]] double scaled_speed() const;
  /// (p q)^a, the factor multiplying the profile arguments.
  [[nodiscard]] double argument_scale() const;
  /// Closed interval covered by the profile arguments over the whole domain.
  [[nodiscard]] std::pair<double, double> argument_range() const;

  /// Same physics with a different order (used by sweeps).
  [[nodiscard]] WaveProblem with_order(FractionalOrder order) const;
  [[nodiscard]] WaveProblem with_profiles(expr::Expression f, expr::Expression g) const;

 private:
  transform::TransformSpec transform_;
  double speed_;
  expr::Expression f_;
  expr::Expression g_;
  double x_max_;
  double t_max_;
};

enum class SolutionKind {
  first_order,     // u = f(X' - c^a T')
  dalembert,       // two half-amplitude waves plus the velocity integral
  cosine_product,  // displacement waves plus cos(X') cos(c^a T') / c^a; only for g = sin
};

const char* to_string(SolutionKind kind);

/// Raised when a solution cannot be evaluated at a grid point; carries the point.
class FieldError : public std::runtime_error {
 public:
  FieldError(const std::string& what, double x, double t);
  [[nodiscard]] double x() const noexcept { return x_; }
  [[nodiscard]] double t() const noexcept { return t_; }

 private:
  double x_;
  double t_;
};

/// Evaluatable u(x, t). Immutable; evaluation is a pure function of (x, t).
class ClosedFormSolution {
 public:
  [[nodiscard]] SolutionKind kind() const noexcept { return kind_; }
  [[nodiscard]] const WaveProblem& problem() const noexcept { return problem_; }
  [[nodiscard]] const ops::QuadratureConfig& quadrature() const noexcept { return cfg_; }

  [[nodiscard]] double operator()(double x, double t) const;

  /// 1/2 [f(k(X'+CT')) + f(k(X'-CT'))], or f(X'-CT') for the first-order kind.
  [[nodiscard]] double displacement_part(double x, double t) const;
  /// The g contribution; 0 for the first-order kind.
  [[nodiscard]] double velocity_part(double x, double t) const;

 private:
  friend ClosedFormSolution solve_first_order(const WaveProblem&);
  friend ClosedFormSolution solve_dalembert(const WaveProblem&, const ops::QuadratureConfig&);
  friend ClosedFormSolution cosine_product_candidate(const WaveProblem&);

  ClosedFormSolution(SolutionKind kind, WaveProblem problem, ops::QuadratureConfig cfg);

  SolutionKind kind_;
  WaveProblem problem_;
  ops::QuadratureConfig cfg_;
  double gamma_ = 1.0;  // Gamma(1+a)
  double speed_a_ = 1.0;
  double arg_scale_ = 1.0;
};

/// Travelling wave of the order-a equation D_t^a u + c^a D_x^a u = 0.
ClosedFormSolution solve_first_order(const WaveProblem& problem);

/// D'Alembert solution of the order-2a equation with the velocity integral done by
/// adaptive quadrature.
ClosedFormSolution solve_dalembert(const WaveProblem& problem, const ops::QuadratureConfig& cfg = {});

/// The alternative closed form with cos(X') cos(c^a T') / c^a in place of the
/// velocity integral. Only defined when g is structurally sin(x) and p = q = 1;
/// kept for comparison in verification, it is not a solution of the problem.
ClosedFormSolution cosine_product_candidate(const WaveProblem& problem);

/// x^a/Gamma(1+a) - c^a t^a/Gamma(1+a): constant along each characteristic.
double characteristic_constant(double x, double t, FractionalOrder order, double c);

/// First-order solution obtained by transforming to (X, T) with the problem's p, q,
/// solving q^a u_T + c^a p^a u_X = 0 there and pulling back.
double first_order_via_transform(const WaveProblem& problem, double x, double t);

/// D'Alembert solution assembled in (X, T) with the problem's p, q and pulled back.
double dalembert_via_transform(const WaveProblem& problem, const ops::QuadratureConfig& cfg, double x, double t);

/// Signed integral of g over [lower, upper] by adaptive quadrature.
double g_integral(const expr::Expression& g, double lower, double upper, const ops::QuadratureConfig& cfg = {});

/// Uniform grid sample of a solution. values are stored time-major: row j holds
/// u(x_0..x_{nx-1}, t_j).
struct Field2D {
  double x_max = 0.0;
  double t_max = 0.0;
  std::size_t nx = 0;
  std::size_t nt = 0;
  std::vector<double> values;

  [[nodiscard]] double x(std::size_t i) const noexcept;
  [[nodiscard]] double t(std::size_t j) const noexcept;
  [[nodiscard]] double at(std::size_t i, std::size_t j) const noexcept { return values[j * nx + i]; }
};

/// Grid coordinate i of n points spanning [0, extent]; the last point is extent exactly.
double grid_coordinate(std::size_t i, std::size_t n, double extent) noexcept;

Field2D evaluate_field(const ClosedFormSolution& sol, std::size_t nx, std::size_t nt);

}  // namespace fracwave::solver
