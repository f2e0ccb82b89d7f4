#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracwave/verify.hpp"

using namespace fracwave;
using namespace fracwave::verify;
using solver::WaveProblem;
using expr::parse;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

WaveProblem example(double a, double c, const char* f, const char* g, double x_max = 2.0, double t_max = 1.0) {
  return WaveProblem(FractionalOrder(a), c, parse(f), parse(g), x_max, t_max);
}

}  // namespace

TEST_CASE("initial conditions of example 1", "[verify][ic]") {
  for (double a : {0.7, 1.0}) {
    const auto p = example(a, 1.0, "x^2", "sin(x)");
    const auto report = check_initial_conditions(p, solver::solve_dalembert(p), 65);
    REQUIRE(report.displacement_ok);
    REQUIRE(report.max_displacement_error <= 1e-10);
    REQUIRE(report.max_velocity_error.has_value());
    REQUIRE(report.velocity_ok);
  }
}

TEST_CASE("zero velocity gives a vanishing gridded time derivative at t = 0", "[verify][ic]") {
  const auto p = example(0.8, 1.3, "cos(x) + x^2", "0");
  const auto report = check_initial_conditions(p, solver::solve_dalembert(p), 33);
  REQUIRE(report.ok());
  REQUIRE(*report.max_velocity_error <= 1e-6);
}

TEST_CASE("example 2: sine product passes, cosine product fails at t = 0", "[verify][ic]") {
  const double a = 0.8;
  const double c = 2.0;
  const auto p = example(a, c, "0", "sin(x)");
  const auto good = check_initial_conditions(p, solver::solve_dalembert(p), 65);
  REQUIRE(good.ok());
  REQUIRE(good.max_displacement_error <= 1e-10);

  const auto bad = check_initial_conditions(p, solver::cosine_product_candidate(p), 65);
  REQUIRE_FALSE(bad.displacement_ok);
  const double C = std::pow(c, a);
  REQUIRE_THAT(bad.displacement_error_at_origin, WithinRel(1.0 / C, 1e-14));
  REQUIRE(bad.displacement_error_at_origin > 0.5 / C);
}

TEST_CASE("first-order problems skip the velocity condition", "[verify][ic]") {
  const auto p = example(0.5, 1.0, "sin(x)", "0");
  const auto report = check_initial_conditions(p, solver::solve_first_order(p), 17);
  REQUIRE(report.ok());
  REQUIRE_FALSE(report.max_velocity_error.has_value());
}

TEST_CASE("residual of the classical solution", "[verify][residual]") {
  const auto p = example(1.0, 1.0, "x^2", "sin(x)");
  const auto r = pde_residual(p, solver::solve_dalembert(p), 64, 64);
  REQUIRE(r.levels.size() == 3);
  REQUIRE(r.nx == 256);
  REQUIRE(r.nt == 256);
  REQUIRE(r.residual_linf <= 1e-6);
  REQUIRE(r.monotone);
  REQUIRE(r.observed_slope.has_value());
  REQUIRE(*r.observed_slope > 0.0);
}

TEST_CASE("residual of a constant solution is zero", "[verify][residual]") {
  for (double a : {0.6, 1.0}) {
    const auto p = example(a, 1.0, "2.5", "0");
    const auto r = pde_residual(p, solver::solve_dalembert(p), 32, 32);
    REQUIRE(r.residual_linf <= 1e-12);
    REQUIRE(r.at_rounding_floor);
    REQUIRE(r.monotone);
    REQUIRE_FALSE(r.observed_slope.has_value());
  }
}

TEST_CASE("example 1 residual decreases monotonically under refinement", "[verify][residual]") {
  const auto p = example(0.7, 1.0, "x^2", "sin(x)");
  const auto r = pde_residual(p, solver::solve_dalembert(p), 64, 64);
  REQUIRE(r.alpha == 0.7);
  REQUIRE(r.monotone);
  REQUIRE(r.levels[1].linf < r.levels[0].linf);
  REQUIRE(r.levels[2].linf < r.levels[1].linf);
  REQUIRE(*r.observed_slope > 0.0);
  REQUIRE(r.residual_l2 <= r.residual_linf);
  REQUIRE(r.extrapolated_linf.has_value());
  REQUIRE_THAT(r.notes.front(), ContainsSubstring("D^a applied twice"));
}

TEST_CASE("first-order residual for an affine profile", "[verify][residual]") {
  const auto p = example(0.6, 1.4, "3*x - 1", "0");
  const auto r = pde_residual(p, solver::solve_first_order(p), 32, 32);
  REQUIRE(r.residual_linf <= 1e-9);
}

TEST_CASE("residual input validation", "[verify][residual]") {
  const auto p = example(0.7, 1.0, "x^2", "sin(x)");
  const auto u = solver::solve_dalembert(p);
  REQUIRE_THROWS_AS(pde_residual(p, u, 16, 64), DomainError);
  ResidualOptions options;
  options.levels = 0;
  REQUIRE_THROWS_AS(pde_residual(p, u, 32, 32, options), DomainError);
}

TEST_CASE("route equivalence", "[verify][route]") {
  for (double a : {0.3, 0.55, 0.8, 1.0}) {
    const WaveProblem p(FractionalOrder(a), 1.6, parse("sin(x) + x^2"), parse("cos(x)"), 2.0, 1.5, 1.5, 0.7);
    REQUIRE(route_equivalence(p, solver::SolutionKind::first_order, 200) <= 1e-12);
  }
  const auto p = example(0.9, 1.0, "x^2", "sin(x)");
  REQUIRE(route_equivalence(p, solver::SolutionKind::dalembert, 50) <= 1e-10);
  REQUIRE_THROWS_AS(route_equivalence(p, solver::SolutionKind::cosine_product, 10), DomainError);
}

TEST_CASE("stability of identical problems", "[verify][stability]") {
  const auto p = example(0.6, 1.0, "x^2", "sin(x)");
  const auto s = stability_check(p, p, 21, 21);
  REQUIRE(s.delta == 0.0);
  REQUIRE(s.observed_gap == 0.0);
  REQUIRE(s.tight_bound_satisfied);
  REQUIRE(s.derived_bound_satisfied);
}

TEST_CASE("constant shift of f shifts u by the same constant", "[verify][stability]") {
  const auto p = example(0.6, 1.0, "x^2", "sin(x)");
  const auto shifted = p.with_profiles(parse("x^2 + 0.01"), p.g());
  const auto s = stability_check(p, shifted, 21, 21);
  REQUIRE_THAT(s.delta, WithinAbs(0.01, 1e-15));
  REQUIRE_THAT(s.observed_gap, WithinAbs(0.01, 1e-12));
  REQUIRE(s.tight_bound_satisfied);
  REQUIRE(s.derived_bound_satisfied);
}

TEST_CASE("velocity shift stays within the integral-term bound", "[verify][stability]") {
  const double a = 0.8;
  const auto p = example(a, 1.0, "x^2", "sin(x)", 2.0, 2.0);
  const auto shifted = p.with_profiles(p.f(), parse("sin(x) + 0.01"));
  const auto s = stability_check(p, shifted, 41, 41);
  REQUIRE(s.horizon == 2.0);
  REQUIRE_THAT(s.delta, WithinAbs(0.01, 1e-15));
  REQUIRE(s.observed_gap <= 0.01 * std::pow(2.0, a) / fracwave::gamma(1.0 + a) + s.quadrature_slack);
  REQUIRE(s.derived_bound_satisfied);
  REQUIRE(s.bound_derived >= s.bound_tight);
}

TEST_CASE("stability_check rejects problems that differ beyond f and g", "[verify][stability]") {
  REQUIRE_THROWS_AS(stability_check(example(0.6, 1.0, "x", "0"), example(0.6, 2.0, "x", "0"), 5, 5), DomainError);
}

TEST_CASE("randomised stability trials respect the derived bound", "[verify][stability]") {
  const auto summary = stability_trials(100, 42);
  REQUIRE(summary.trials == 100);
  REQUIRE(summary.derived_violations == 0);
  REQUIRE(summary.worst_derived_ratio <= 1.0);
  REQUIRE(summary.tight_violations <= summary.trials);
}

TEST_CASE("full verification of example 1", "[verify]") {
  const auto p = example(0.9, 1.0, "x^2", "sin(x)");
  const auto report = run_verification(p, solver::solve_dalembert(p));
  REQUIRE(report.passed());
  REQUIRE(report.route_deviation.has_value());
  REQUIRE(report.candidates.size() == 1);
  REQUIRE_FALSE(report.candidates[0].initial_conditions.displacement_ok);
  const auto text = format_report(report);
  REQUIRE_THAT(text, ContainsSubstring("result: PASS"));
  REQUIRE_THAT(text, ContainsSubstring("sin(X') sin(c^a T')"));
}

TEST_CASE("full verification rejects the cosine-product form", "[verify]") {
  const auto p = example(0.8, 1.0, "0", "sin(x)");
  const auto report = run_verification(p, solver::cosine_product_candidate(p));
  REQUIRE_FALSE(report.passed());
  REQUIRE_FALSE(report.initial_conditions.displacement_ok);
  REQUIRE_THAT(format_report(report), ContainsSubstring("result: FAIL"));
}
