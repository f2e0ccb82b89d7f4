#include "fracwave/solver.hpp"

#include <cmath>
#include <string>

namespace fracwave::solver {

WaveProblem::WaveProblem(FractionalOrder order, double speed, expr::Expression f, expr::Expression g, double x_max,
                         double t_max, double p, double q)
    : transform_(order, p, q), speed_(speed), f_(std::move(f)), g_(std::move(g)), x_max_(x_max), t_max_(t_max) {
  if (!(speed > 0.0) || !std::isfinite(speed)) throw DomainError("wave speed c must be positive");
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
  // The profiles must be evaluable at the extreme arguments the solution will use.
  const auto [lo, hi] = argument_range();
  for (double s : {lo, 0.0, argument_scale() * transform::scaled_coordinate(x_max, order), hi}) {
    expr::evaluate(f_, s);
    expr::evaluate(g_, s);
  }
}

double WaveProblem::scaled_speed() const { return std::pow(speed_, order().value()); }

double WaveProblem::argument_scale() const {
  return std::pow(transform_.p() * transform_.q(), order().value());
}

std::pair<double, double> WaveProblem::argument_range() const {
  const double k = argument_scale();
  const double X = transform::scaled_coordinate(x_max_, order());
  const double CT = scaled_speed() * transform::scaled_coordinate(t_max_, order());
  return {-k * CT, k * (X + CT)};
}

WaveProblem WaveProblem::with_order(FractionalOrder order) const {
  return WaveProblem(order, speed_, f_, g_, x_max_, t_max_, transform_.p(), transform_.q());
}

WaveProblem WaveProblem::with_profiles(expr::Expression f, expr::Expression g) const {
  return WaveProblem(order(), speed_, std::move(f), std::move(g), x_max_, t_max_, transform_.p(), transform_.q());
}

const char* to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::first_order: return "first_order";
    case SolutionKind::dalembert: return "dalembert";
    case SolutionKind::cosine_product: return "cosine_product";
  }
  return "unknown";
}

FieldError::FieldError(const std::string& what, double x, double t)
    : std::runtime_error("at (x=" + std::to_string(x) + ", t=" + std::to_string(t) + "): " + what), x_(x), t_(t) {}

ClosedFormSolution::ClosedFormSolution(SolutionKind kind, WaveProblem problem, ops::QuadratureConfig cfg)
    : kind_(kind), problem_(std::move(problem)), cfg_(cfg) {
  cfg_.validate();
  gamma_ = gamma(1.0 + problem_.order().value());
  speed_a_ = problem_.scaled_speed();
  arg_scale_ = problem_.argument_scale();
}

namespace {

double scaled(double s, FractionalOrder order, double gamma_1a) {
  if (order.is_classical()) return s;
  return std::pow(s, order.value()) / gamma_1a;
}

void check_domain(double x, double t) {
  if (!(x >= 0.0) || !(t >= 0.0)) throw DomainError("solutions are defined for x >= 0 and t >= 0");
}

}  // namespace

double ClosedFormSolution::displacement_part(double x, double t) const {
  check_domain(x, t);
  const auto order = problem_.order();
  if (kind_ == SolutionKind::first_order) {
    return expr::evaluate(problem_.f(), characteristic_constant(x, t, order, problem_.speed()));
  }
  const double X = scaled(x, order, gamma_);
  const double CT = speed_a_ * scaled(t, order, gamma_);
  const double upper = arg_scale_ * (X + CT);
  const double lower = arg_scale_ * (X - CT);
  return 0.5 * (expr::evaluate(problem_.f(), upper) + expr::evaluate(problem_.f(), lower));
}

double ClosedFormSolution::velocity_part(double x, double t) const {
  check_domain(x, t);
  const auto order = problem_.order();
  switch (kind_) {
    case SolutionKind::first_order: return 0.0;
    case SolutionKind::dalembert: {
      const double X = scaled(x, order, gamma_);
      const double CT = speed_a_ * scaled(t, order, gamma_);
      const double upper = arg_scale_ * (X + CT);
      const double lower = arg_scale_ * (X - CT);
      return g_integral(problem_.g(), lower, upper, cfg_) / (2.0 * speed_a_ * arg_scale_);
    }
    case SolutionKind::cosine_product: {
      const double X = scaled(x, order, gamma_);
      const double CT = speed_a_ * scaled(t, order, gamma_);
      return std::cos(X) * std::cos(CT) / speed_a_;
    }
  }
  return 0.0;
}

double ClosedFormSolution::operator()(double x, double t) const {
  return displacement_part(x, t) + velocity_part(x, t);
}

ClosedFormSolution solve_first_order(const WaveProblem& problem) {
  return ClosedFormSolution(SolutionKind::first_order, problem, ops::QuadratureConfig{});
}

ClosedFormSolution solve_dalembert(const WaveProblem& problem, const ops::QuadratureConfig& cfg) {
  return ClosedFormSolution(SolutionKind::dalembert, problem, cfg);
}

ClosedFormSolution cosine_product_candidate(const WaveProblem& problem) {
  if (!(problem.g() == expr::sin(expr::Expression::variable()))) {
    throw DomainError("the cosine-product form is only defined for g(x) = sin(x)");
  }
  if (problem.transform().p() != 1.0 || problem.transform().q() != 1.0) {
    throw DomainError("the cosine-product form is only defined for p = q = 1");
  }
  return ClosedFormSolution(SolutionKind::cosine_product, problem, ops::QuadratureConfig{});
}

double characteristic_constant(double x, double t, FractionalOrder order, double c) {
  const double a = order.value();
  return (std::pow(x, a) - std::pow(c, a) * std::pow(t, a)) / gamma(1.0 + a);
}

double first_order_via_transform(const WaveProblem& problem, double x, double t) {
  const auto& spec = problem.transform();
  const auto coords = transform::to_fractal(x, t, spec);
  const double qa = transform::operator_scale(spec, transform::Axis::time);
  const double pa = transform::operator_scale(spec, transform::Axis::space);
  const double ca = problem.scaled_speed();
  // q^a u_T + c^a p^a u_X = 0  =>  u = phi(X - (c^a p^a / q^a) T), phi(X) = f(X / p^a).
  const double invariant = coords.X - ca * pa / qa * coords.T;
  return expr::evaluate(problem.f(), invariant / pa);
}

double dalembert_via_transform(const WaveProblem& problem, const ops::QuadratureConfig& cfg, double x, double t) {
  const auto& spec = problem.transform();
  const auto coords = transform::to_fractal(x, t, spec);
  const double qa = transform::operator_scale(spec, transform::Axis::time);
  const double pa = transform::operator_scale(spec, transform::Axis::space);
  const double ca = problem.scaled_speed();
  const double plus = qa * coords.X + ca * pa * coords.T;
  const double minus = qa * coords.X - ca * pa * coords.T;
  const double waves = 0.5 * (expr::evaluate(problem.f(), plus) + expr::evaluate(problem.f(), minus));
  return waves + g_integral(problem.g(), minus, plus, cfg) / (2.0 * ca * pa * qa);
}

double g_integral(const expr::Expression& g, double lower, double upper, const ops::QuadratureConfig& cfg) {
  cfg.validate();
  const auto result = ops::integrate_adaptive([&g](double s) { return expr::evaluate(g, s); }, lower, upper,
                                              cfg.adaptive_tol, cfg.max_subdivisions);
  return result.value;
}

double grid_coordinate(std::size_t i, std::size_t n, double extent) noexcept {
  if (i + 1 >= n) return extent;
  return extent * static_cast<double>(i) / static_cast<double>(n - 1);
}

double Field2D::x(std::size_t i) const noexcept { return grid_coordinate(i, nx, x_max); }
double Field2D::t(std::size_t j) const noexcept { return grid_coordinate(j, nt, t_max); }

Field2D evaluate_field(const ClosedFormSolution& sol, std::size_t nx, std::size_t nt) {
  if (nx < 2 || nt < 2) throw DomainError("evaluate_field: need at least two points per axis");
  Field2D field{sol.problem().x_max(), sol.problem().t_max(), nx, nt, std::vector<double>(nx * nt)};
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = field.t(j);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = field.x(i);
      double u = 0.0;
      try {
        u = sol(x, t);
      } catch (const expr::EvaluationError& e) {
        throw FieldError(e.what(), x, t);
      } catch (const QuadratureError& e) {
        throw FieldError(e.what(), x, t);
      }
      if (!std::isfinite(u)) throw FieldError("solution is not finite", x, t);
      field.values[j * nx + i] = u;
    }
  }
  return field;
}

}  // namespace fracwave::solver
