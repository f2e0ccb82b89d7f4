#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracwave/core.hpp"
#include "fracwave/solver.hpp"

namespace fracwave::verify {

// ---------------------------------------------------------------------------
// Initial conditions

struct InitialConditionOptions {
  Tolerance displacement_tol{1e-10, 0.0};
  /// Acceptance for the order-a time derivative at t = 0.
  Tolerance velocity_tol{1e-6, 1e-6};
  /// Intervals of the t-line used by the gridded derivative.
  std::size_t t_intervals = 512;
};

struct InitialConditionReport {
  std::size_t samples = 0;
  double max_displacement_error = 0.0;
  double displacement_error_at_origin = 0.0;  // |u(0,0) - f(0)|
  bool displacement_ok = false;
  /// Absent for first-order problems, which carry no velocity condition.
  std::optional<double> max_velocity_error;
  bool velocity_ok = true;

  [[nodiscard]] bool ok() const noexcept { return displacement_ok && velocity_ok; }
};

/// Compare u(x, 0) with f(k X') and the gridded D_t^a u(x, 0) with g(k X') at nx
/// points spanning [0, x_max].
InitialConditionReport check_initial_conditions(const solver::WaveProblem& problem,
                                                const solver::ClosedFormSolution& sol, std::size_t nx,
                                                const InitialConditionOptions& options = {});

// ---------------------------------------------------------------------------
// PDE residual

struct ResidualOptions {
  std::size_t levels = 3;
  /// Nodes excluded next to x = 0 and t = 0.
  std::size_t collar = 2;
  /// Starting weights for the exponents k a < 2 + a. Every component left
  /// uncorrected by the first application of D^a then has exponent at least 2 when
  /// the second application sees it.
  bool singular_corrections = true;
};

struct ResidualLevel {
  std::size_t nx = 0;  // intervals
  std::size_t nt = 0;
  double linf = 0.0;
  double l2 = 0.0;  // root mean square over the included nodes
};

struct ResidualReport {
  std::size_t nx = 0;  // finest level
  std::size_t nt = 0;
  double alpha = 1.0;
  solver::SolutionKind kind = solver::SolutionKind::dalembert;
  double residual_linf = 0.0;
  double residual_l2 = 0.0;
  std::vector<ResidualLevel> levels;
  /// -d log(Linf) / d log(N), least squares over the levels; needs >= 3 levels.
  std::optional<double> observed_slope;
  /// Aitken extrapolation of the Linf sequence, floored at 0; needs >= 3 levels.
  std::optional<double> extrapolated_linf;
  /// Every level is below the previous one or under the rounding floor.
  bool monotone = false;
  /// All levels under the rounding floor.
  bool at_rounding_floor = false;
  std::vector<std::string> notes;
};

/// Residual of the solved equation on nested grids (nx, nt), (2nx, 2nt), ...
///
/// For the D'Alembert kinds the 2a-order derivatives are the composition
/// D^a o D^a applied line by line; the residual is u_tt - c^(2a) u_xx. For the
/// first-order kind it is D_t^a u + c^a D_x^a u.
ResidualReport pde_residual(const solver::WaveProblem& problem, const solver::ClosedFormSolution& sol,
                            std::size_t nx, std::size_t nt, const ResidualOptions& options = {});

// ---------------------------------------------------------------------------
// Route equivalence

/// Largest |difference| between the direct closed form and the one assembled in
/// transformed coordinates, over n_samples pseudo-random points of the domain.
double route_equivalence(const solver::WaveProblem& problem, solver::SolutionKind kind, std::size_t n_samples,
                         std::uint64_t seed = 7);

// ---------------------------------------------------------------------------
// Stability

struct StabilityReport {
  double delta = 0.0;
  double horizon = 0.0;
  double observed_gap = 0.0;
  double bound_tight = 0.0;    // delta (1 + T^a)
  double bound_derived = 0.0;  // delta (1 + T^a / Gamma(1+a))
  /// Quadrature error allowance added to the bounds when comparing.
  double quadrature_slack = 0.0;
  bool tight_bound_satisfied = false;
  bool derived_bound_satisfied = false;
};

/// Compares two D'Alembert solutions whose problems differ only in f and g.
/// delta is the largest sampled |f1 - f2| or |g1 - g2| over 1024 points of the
/// argument range.
StabilityReport stability_check(const solver::WaveProblem& first, const solver::WaveProblem& second,
                                std::size_t nx, std::size_t nt, const ops::QuadratureConfig& cfg = {});

struct StabilityTrialSummary {
  std::size_t trials = 0;
  std::size_t derived_violations = 0;
  std::size_t tight_violations = 0;
  double worst_derived_ratio = 0.0;  // max observed_gap / bound_derived
};

/// Randomised perturbations of a base problem: horizons up to max_horizon,
/// perturbation sizes delta up to max_delta.
StabilityTrialSummary stability_trials(std::size_t trials, std::uint64_t seed, double max_delta = 0.1,
                                       double max_horizon = 2.0);

// ---------------------------------------------------------------------------
// Full verification pass

struct CandidateCheck {
  std::string name;
  InitialConditionReport initial_conditions;
  /// |u(x,0) - f(X')| at the sampled point nearest x = 0.
  double displacement_error_near_origin = 0.0;
};

struct VerificationReport {
  solver::SolutionKind kind = solver::SolutionKind::dalembert;
  InitialConditionReport initial_conditions;
  ResidualReport residual;
  std::optional<double> route_deviation;
  /// Acceptance for route_deviation, widened by the quadrature tolerance for D'Alembert.
  std::optional<double> route_tolerance;
  std::vector<CandidateCheck> candidates;
  std::vector<std::string> notes;

  [[nodiscard]] bool passed() const;
};

struct VerificationOptions {
  std::size_t ic_samples = 257;
  /// Coarsest residual grid, in intervals.
  std::size_t residual_nx = 64;
  std::size_t residual_nt = 64;
  InitialConditionOptions ic;
  ResidualOptions residual;
  double route_tolerance = 1e-12;
  std::size_t route_samples = 200;
};

VerificationReport run_verification(const solver::WaveProblem& problem, const solver::ClosedFormSolution& sol,
                                    const VerificationOptions& options = {});

/// Human-readable block.
std::string format_report(const VerificationReport& report);

}  // namespace fracwave::verify
