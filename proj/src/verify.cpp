#include "fracwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "fracwave/fracops.hpp"
#include "fracwave/transform.hpp"

namespace fracwave::verify {

using solver::ClosedFormSolution;
using solver::SolutionKind;
using solver::WaveProblem;

namespace {

double evaluate_at(const ClosedFormSolution& sol, double x, double t) {
  try {
    return sol(x, t);
  } catch (const expr::EvaluationError& e) {
    throw solver::FieldError(e.what(), x, t);
  } catch (const QuadratureError& e) {
    throw solver::FieldError(e.what(), x, t);
  }
}

double initial_argument(const WaveProblem& problem, double x) {
  return problem.argument_scale() * transform::scaled_coordinate(x, problem.order());
}

std::vector<double> correction_exponents(FractionalOrder order) {
  return ops::scaled_power_exponents(order, 2.0 + order.value());
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

InitialConditionReport check_initial_conditions(const WaveProblem& problem, const ClosedFormSolution& sol,
                                                std::size_t nx, const InitialConditionOptions& options) {
  if (nx < 2) throw DomainError("check_initial_conditions: need at least two samples");
  InitialConditionReport report;
  report.samples = nx;
  report.displacement_ok = true;

  for (std::size_t i = 0; i < nx; ++i) {
    const double x = solver::grid_coordinate(i, nx, problem.x_max());
    const double expected = expr::evaluate(problem.f(), initial_argument(problem, x));
    const double err = std::abs(evaluate_at(sol, x, 0.0) - expected);
    if (i == 0) report.displacement_error_at_origin = err;
    report.max_displacement_error = std::max(report.max_displacement_error, err);
    if (!options.displacement_tol.accepts(err, expected)) report.displacement_ok = false;
  }

  if (sol.kind() == SolutionKind::first_order) return report;

  const std::size_t m = options.t_intervals;
  const double dt = problem.t_max() / static_cast<double>(m);
  ops::GridDerivativeOptions grid_options;
  grid_options.singular_exponents = correction_exponents(problem.order());
  const ops::JumarieGridOperator op(m, dt, problem.order(), grid_options);

  std::vector<double> line(m + 1);
  std::vector<double> derivative(m + 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = solver::grid_coordinate(i, nx, problem.x_max());
    for (std::size_t j = 0; j <= m; ++j) {
      line[j] = evaluate_at(sol, x, solver::grid_coordinate(j, m + 1, problem.t_max()));
    }
    op.apply(line, derivative);
    const double expected = expr::evaluate(problem.g(), initial_argument(problem, x));
    const double err = std::abs(derivative[0] - expected);
    worst = std::max(worst, err);
    if (!options.velocity_tol.accepts(err, expected)) report.velocity_ok = false;
  }
  report.max_velocity_error = worst;
  return report;
}

ResidualReport pde_residual(const WaveProblem& problem, const ClosedFormSolution& sol, std::size_t nx,
                            std::size_t nt, const ResidualOptions& options) {
  if (nx < 32 || nt < 32) throw DomainError("pde_residual: grids need at least 32 intervals per axis");
  if (options.levels == 0) throw DomainError("pde_residual: need at least one level");
  if (options.collar >= std::min(nx, nt)) throw DomainError("pde_residual: collar wider than the grid");

  const FractionalOrder order = problem.order();
  const double a = order.value();
  const bool composed = sol.kind() != SolutionKind::first_order;
  ops::GridDerivativeOptions grid_options;
  if (options.singular_corrections) grid_options.singular_exponents = correction_exponents(order);

  ResidualReport report;
  report.alpha = a;
  report.kind = sol.kind();
  std::vector<double> floors;

  for (std::size_t level = 0; level < options.levels; ++level) {
    const std::size_t n_x = nx << level;
    const std::size_t n_t = nt << level;
    const std::size_t px = n_x + 1;
    const std::size_t pt = n_t + 1;

    // u[i * pt + j] = u(x_i, t_j)
    std::vector<double> u(px * pt);
    double u_max = 0.0;
    for (std::size_t i = 0; i < px; ++i) {
      const double x = solver::grid_coordinate(i, px, problem.x_max());
      for (std::size_t j = 0; j < pt; ++j) {
        const double value = evaluate_at(sol, x, solver::grid_coordinate(j, pt, problem.t_max()));
        u[i * pt + j] = value;
        u_max = std::max(u_max, std::abs(value));
      }
    }

    const ops::JumarieGridOperator op_x(n_x, problem.x_max() / static_cast<double>(n_x), order, grid_options);
    const ops::JumarieGridOperator op_t(n_t, problem.t_max() / static_cast<double>(n_t), order, grid_options);

    std::vector<double> d_t(px * pt);
    std::vector<double> d_x(px * pt);
    {
      std::vector<double> once(pt);
      for (std::size_t i = 0; i < px; ++i) {
        std::span<const double> line(&u[i * pt], pt);
        std::span<double> out(&d_t[i * pt], pt);
        if (composed) {
          op_t.apply(line, once);
          op_t.apply(once, out);
        } else {
          op_t.apply(line, out);
        }
      }
    }
    {
      std::vector<double> line(px);
      std::vector<double> once(px);
      std::vector<double> twice(px);
      for (std::size_t j = 0; j < pt; ++j) {
        for (std::size_t i = 0; i < px; ++i) line[i] = u[i * pt + j];
        if (composed) {
          op_x.apply(line, once);
          op_x.apply(once, twice);
        } else {
          op_x.apply(line, twice);
        }
        for (std::size_t i = 0; i < px; ++i) d_x[i * pt + j] = twice[i];
      }
    }

    const double coupling = composed ? -std::pow(problem.speed(), 2.0 * a) : std::pow(problem.speed(), a);
    double linf = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = options.collar; i < px; ++i) {
      for (std::size_t j = options.collar; j < pt; ++j) {
        const double r = d_t[i * pt + j] + coupling * d_x[i * pt + j];
        if (!std::isfinite(r)) throw QuadratureError("pde_residual: non-finite residual");
        linf = std::max(linf, std::abs(r));
        sum_sq += r * r;
        ++count;
      }
    }
    report.levels.push_back({n_x, n_t, linf, std::sqrt(sum_sq / static_cast<double>(count))});
    floors.push_back(1e-8 * std::max(1.0, u_max));
  }

  const auto& finest = report.levels.back();
  report.nx = finest.nx;
  report.nt = finest.nt;
  report.residual_linf = finest.linf;
  report.residual_l2 = finest.l2;

  report.at_rounding_floor = true;
  report.monotone = true;
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const double r = report.levels[k].linf;
    if (r > floors[k]) report.at_rounding_floor = false;
    if (k > 0 && r > report.levels[k - 1].linf && r > floors[k]) report.monotone = false;
  }

  const std::size_t n_levels = report.levels.size();
  if (n_levels >= 3 && !report.at_rounding_floor) {
    bool positive = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& lv : report.levels) {
      if (!(lv.linf > 0.0)) positive = false;
      const double lx = std::log(static_cast<double>(lv.nx));
      const double ly = std::log(lv.linf);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double nl = static_cast<double>(n_levels);
    const double denom = nl * sxx - sx * sx;
    if (positive && denom > 0.0) report.observed_slope = -(nl * sxy - sx * sy) / denom;

    const double r1 = report.levels[n_levels - 3].linf;
    const double r2 = report.levels[n_levels - 2].linf;
    const double r3 = report.levels[n_levels - 1].linf;
    const double d1 = r2 - r1;
    const double d2 = r3 - r2;
    if (d1 != 0.0 && d2 / d1 > 0.0 && d2 / d1 < 1.0) {
      report.extrapolated_linf = std::max(0.0, r3 - d2 * d2 / (d2 - d1));
    }
  }

  if (composed) {
    report.notes.push_back("order-2a derivatives computed as D^a applied twice along each grid line");
  }
  report.notes.push_back("collar of " + std::to_string(options.collar) + " nodes excluded at x = 0 and t = 0");
  if (report.at_rounding_floor) {
    report.notes.push_back("residual is at the floating-point floor on every level");
  } else if (report.extrapolated_linf && *report.extrapolated_linf > 0.1 * report.residual_linf) {
    report.notes.push_back("residual levels approach a nonzero limit (extrapolated Linf " +
                           format_number(*report.extrapolated_linf) +
                           "); the closed form does not make this residual vanish at this order");
  }
  return report;
}

double route_equivalence(const WaveProblem& problem, SolutionKind kind, std::size_t n_samples, std::uint64_t seed) {
  if (kind == SolutionKind::cosine_product) {
    throw DomainError("route_equivalence: no transformed-coordinate route for the cosine-product form");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, problem.x_max());
  std::uniform_real_distribution<double> ut(0.0, problem.t_max());
  const ops::QuadratureConfig cfg;
  const auto sol = kind == SolutionKind::first_order ? solver::solve_first_order(problem)
                                                     : solver::solve_dalembert(problem, cfg);
  double worst = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double x = ux(rng);
    const double t = ut(rng);
    const double direct = sol(x, t);
    const double via = kind == SolutionKind::first_order ? solver::first_order_via_transform(problem, x, t)
                                                         : solver::dalembert_via_transform(problem, cfg, x, t);
    worst = std::max(worst, std::abs(direct - via));
  }
  return worst;
}

StabilityReport stability_check(const WaveProblem& first, const WaveProblem& second, std::size_t nx,
                                std::size_t nt, const ops::QuadratureConfig& cfg) {
  if (!(first.order() == second.order()) || first.speed() != second.speed() ||
      first.x_max() != second.x_max() || first.t_max() != second.t_max() ||
      first.transform().p() != second.transform().p() || first.transform().q() != second.transform().q()) {
    throw DomainError("stability_check: problems may differ only in f and g");
  }
  StabilityReport report;
  const double a = first.order().value();
  report.horizon = first.t_max();

  const auto [lo, hi] = first.argument_range();
  constexpr std::size_t kDeltaSamples = 1024;
  for (std::size_t i = 0; i < kDeltaSamples; ++i) {
    const double s = i + 1 == kDeltaSamples ? hi : lo + (hi - lo) * static_cast<double>(i) / (kDeltaSamples - 1);
    report.delta = std::max(report.delta, std::abs(expr::evaluate(first.f(), s) - expr::evaluate(second.f(), s)));
    report.delta = std::max(report.delta, std::abs(expr::evaluate(first.g(), s) - expr::evaluate(second.g(), s)));
  }

  const auto sol1 = solver::solve_dalembert(first, cfg);
  const auto sol2 = solver::solve_dalembert(second, cfg);
  const double integral_scale = 2.0 * first.scaled_speed() * first.argument_scale();
  const auto& tol = cfg.adaptive_tol;
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = solver::grid_coordinate(j, nt, first.t_max());
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = solver::grid_coordinate(i, nx, first.x_max());
      const double v1 = sol1.velocity_part(x, t);
      const double v2 = sol2.velocity_part(x, t);
      const double u1 = sol1.displacement_part(x, t) + v1;
      const double u2 = sol2.displacement_part(x, t) + v2;
      report.observed_gap = std::max(report.observed_gap, std::abs(u1 - u2));
      if (t > 0.0) {
        const double slack = (tol.bound_for(integral_scale * v1) + tol.bound_for(integral_scale * v2)) / integral_scale;
        report.quadrature_slack = std::max(report.quadrature_slack, slack);
      }
    }
  }

  const double horizon_a = std::pow(report.horizon, a);
  report.bound_tight = report.delta * (1.0 + horizon_a);
  report.bound_derived = report.delta * (1.0 + horizon_a / gamma(1.0 + a));
  report.tight_bound_satisfied = report.observed_gap <= report.bound_tight + report.quadrature_slack;
  report.derived_bound_satisfied = report.observed_gap <= report.bound_derived + report.quadrature_slack;
  return report;
}

StabilityTrialSummary stability_trials(std::size_t trials, std::uint64_t seed, double max_delta,
                                       double max_horizon) {
  using expr::Expression;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const Expression x = Expression::variable();
  const Expression base_f = expr::pow(x, 2.0);
  const Expression base_g = expr::sin(x);

  // A constant offset plus one cosine mode, total amplitude `size`.
  auto perturbation = [&](double size) {
    const double split = uniform(0.0, 1.0);
    const double sign = uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    const double offset = sign * size * split;
    const double amplitude = size * (1.0 - split);
    const double omega = uniform(0.2, 3.0);
    const double phase = uniform(0.0, 6.283185307179586);
    return Expression::literal(offset) +
           Expression::literal(amplitude) *
               expr::cos(Expression::literal(omega) * x + Expression::literal(phase));
  };

  StabilityTrialSummary summary;
  for (std::size_t k = 0; k < trials; ++k) {
    const FractionalOrder order(uniform(0.3, 1.0));
    const double speed = uniform(0.5, 2.0);
    const double horizon = uniform(0.1, max_horizon);
    const double x_max = uniform(1.0, 3.0);
    const double size = uniform(1e-4, max_delta);
    const int which = static_cast<int>(uniform(0.0, 3.0));  // f only, g only, both
    Expression f2 = base_f;
    Expression g2 = base_g;
    if (which != 1) f2 = base_f + perturbation(size);
    if (which != 0) g2 = base_g + perturbation(size);

    const WaveProblem first(order, speed, base_f, base_g, x_max, horizon);
    const WaveProblem second = first.with_profiles(f2, g2);
    const auto report = stability_check(first, second, 41, 41);
    ++summary.trials;
    if (!report.derived_bound_satisfied) ++summary.derived_violations;
    if (!report.tight_bound_satisfied) ++summary.tight_violations;
    if (report.bound_derived > 0.0) {
      summary.worst_derived_ratio = std::max(summary.worst_derived_ratio, report.observed_gap / report.bound_derived);
    }
  }
  return summary;
}

bool VerificationReport::passed() const {
  if (!initial_conditions.ok()) return false;
  if (!residual.monotone) return false;
  if (route_deviation && route_tolerance && *route_deviation > *route_tolerance) return false;
  return true;
}

VerificationReport run_verification(const WaveProblem& problem, const ClosedFormSolution& sol,
                                    const VerificationOptions& options) {
  VerificationReport report;
  report.kind = sol.kind();
  report.initial_conditions = check_initial_conditions(problem, sol, options.ic_samples, options.ic);
  report.residual = pde_residual(problem, sol, options.residual_nx, options.residual_nt, options.residual);

  if (sol.kind() != SolutionKind::cosine_product) {
    report.route_deviation = route_equivalence(problem, sol.kind(), options.route_samples);
    double tol = options.route_tolerance;
    if (sol.kind() == SolutionKind::dalembert) {
      // The two routes round the integration limits differently, so their
      // quadratures may stop on different partitions.
      const auto& q = sol.quadrature().adaptive_tol;
      tol += 2.0 * std::max(q.abs_tol, q.rel_tol) / (2.0 * problem.scaled_speed() * problem.argument_scale());
    }
    report.route_tolerance = tol;
  }

  const bool sine_velocity = problem.g() == expr::sin(expr::Expression::variable());
  const bool unit_scales = problem.transform().p() == 1.0 && problem.transform().q() == 1.0;
  if (sol.kind() == SolutionKind::dalembert && sine_velocity && unit_scales) {
    const auto candidate = solver::cosine_product_candidate(problem);
    CandidateCheck check;
    check.name = solver::to_string(SolutionKind::cosine_product);
    check.initial_conditions = check_initial_conditions(problem, candidate, options.ic_samples, options.ic);
    check.displacement_error_near_origin = check.initial_conditions.displacement_error_at_origin;
    report.candidates.push_back(check);
    report.notes.push_back(
        "for g = sin the velocity term integrates to sin(X') sin(c^a T') / c^a; the cosine-product form "
        "cos(X') cos(c^a T') / c^a misses u(x,0) = f(X') by " +
        format_number(check.initial_conditions.max_displacement_error));
  }
  return report;
}

std::string format_report(const VerificationReport& report) {
  std::ostringstream out;
  const auto& ic = report.initial_conditions;
  out << "solution kind: " << solver::to_string(report.kind) << "\n";
  out << "initial displacement: max error " << format_number(ic.max_displacement_error) << " over " << ic.samples
      << " points -> " << (ic.displacement_ok ? "ok" : "FAIL") << "\n";
  if (ic.max_velocity_error) {
    out << "initial a-velocity:   max error " << format_number(*ic.max_velocity_error) << " -> "
        << (ic.velocity_ok ? "ok" : "FAIL") << "\n";
  }
  const auto& r = report.residual;
  out << "residual (alpha " << format_number(r.alpha) << "):\n";
  for (const auto& lv : r.levels) {
    out << "  " << lv.nx << " x " << lv.nt << ": Linf " << format_number(lv.linf) << "  L2 " << format_number(lv.l2)
        << "\n";
  }
  out << "  monotone decrease: " << (r.monotone ? "yes" : "NO");
  if (r.observed_slope) out << ", slope " << format_number(*r.observed_slope);
  if (r.extrapolated_linf) out << ", extrapolated Linf " << format_number(*r.extrapolated_linf);
  out << "\n";
  if (report.route_deviation) {
    out << "route equivalence: max deviation " << format_number(*report.route_deviation) << " (tolerance "
        << format_number(report.route_tolerance.value_or(0.0)) << ")\n";
  }
  for (const auto& c : report.candidates) {
    out << "candidate " << c.name << ": displacement error max " << format_number(c.initial_conditions.max_displacement_error)
        << ", at x = 0 " << format_number(c.displacement_error_near_origin) << "\n";
  }
  for (const auto& note : r.notes) out << "note: " << note << "\n";
  for (const auto& note : report.notes) out << "note: " << note << "\n";
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace fracwave::verify
