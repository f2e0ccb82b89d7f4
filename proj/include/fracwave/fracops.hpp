#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracwave/core.hpp"
#include "fracwave/expr.hpp"

namespace fracwave::ops {

using RealFunction = std::function<double(double)>;

/// Resolution knobs shared by the pointwise operators and the smooth integrals.
struct QuadratureConfig {
  /// Uniform panels of the singular-kernel product rule on [0, x].
  int n_panels = 1024;
  /// Acceptance for adaptive integration of smooth integrands.
  Tolerance adaptive_tol{1e-10, 1e-10};
  /// Upper bound on adaptive subintervals.
  std::size_t max_subdivisions = std::size_t{1} << 20;

  void validate() const;
};

/// Uniformly spaced samples v_0..v_N at x0 + i*dx.
class Samples1D {
 public:
  Samples1D(double x0, double dx, std::vector<double> values);

  [[nodiscard]] double x0() const noexcept { return x0_; }
  [[nodiscard]] double dx() const noexcept { return dx_; }
  /// Number of intervals N (one less than the number of samples).
  [[nodiscard]] std::size_t intervals() const noexcept { return values_.size() - 1; }
  [[nodiscard]] double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  static Samples1D from_function(const RealFunction& f, double x0, double x_max, std::size_t intervals);

 private:
  double x0_;
  double dx_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Pointwise operators, lower terminal 0.
//
// The weakly singular integrals use product integration against the
// piecewise-linear interpolant on cfg.n_panels uniform panels, with exact kernel
// moments per panel. Outer d/dx is a central difference of the inner integral with
// step h = max(1e-5 x, 1e-8); when x - h < 0 a second-order forward difference is
// used instead, which is how the x = 0 values (limits from the right) are defined.

/// Riemann-Liouville integral (1/Gamma(a)) int_0^x (x-s)^(a-1) f(s) ds.
double rl_integral(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});
double rl_integral(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});

/// d/dx of the order-(1-a) integral. Requires x > 0; at a = 1 it is the ordinary
/// derivative.
double rl_derivative(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});
double rl_derivative(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});

/// Order-(1-a) integral of f'. f' comes from central differencing f.
double caputo_derivative(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});
double caputo_derivative(const expr::Expression& f, FractionalOrder order, double x,
                         const QuadratureConfig& cfg = {});

/// Modified Riemann-Liouville derivative: the R-L derivative of f - f(0).
///
/// The Expression overload builds `f - f(0)` as a tree and hands it to the same
/// kernel as rl_derivative, so the two agree bit for bit on that input.
double jumarie_derivative(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});
double jumarie_derivative(const expr::Expression& f, FractionalOrder order, double x,
                          const QuadratureConfig& cfg = {});

/// int_0^x f(s) (ds)^a = Gamma(1+a) * I^a f(x).
double integral_dx_alpha(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg = {});
double integral_dx_alpha(const expr::Expression& f, FractionalOrder order, double x,
                         const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// Gridded Jumarie derivative.

/// Exponents s for which the gridded operator is made exact on t^s.
///
/// Functions of the scaled coordinate t^a/Gamma(1+a) expand in powers t^(k a);
/// those with small k are not resolved by piecewise-linear interpolation near 0.
/// Each listed exponent adds one starting weight per node, fitted on the first
/// len(exponents) samples so that the rule reproduces D^a t^s exactly. Linear
/// data stays exact only if 1 is among the exponents.
struct GridDerivativeOptions {
  std::vector<double> singular_exponents;
};

/// The exponents k*a (k = 1, 2, ...) strictly below `limit`. Empty for a = 1.
std::vector<double> scaled_power_exponents(FractionalOrder order, double limit);

/// Precomputed gridded Jumarie derivative for one (N, dx, order) combination, to
/// be applied to many sample lines.
///
/// For 0 < a < 1 the samples are interpolated piecewise linearly after subtracting
/// the value at node 0 and the order-(1-a) product integral is differentiated
/// exactly (the L1 form), plus the optional starting weights. For a = 1 it is the
/// fourth-order central difference with fourth-order one-sided stencils on the
/// two nodes nearest each end.
class JumarieGridOperator {
 public:
  JumarieGridOperator(std::size_t intervals, double dx, FractionalOrder order, GridDerivativeOptions options = {});

  [[nodiscard]] std::size_t intervals() const noexcept { return n_; }
  [[nodiscard]] double dx() const noexcept { return dx_; }
  [[nodiscard]] FractionalOrder order() const noexcept { return order_; }

  /// `in` and `out` both hold N+1 values and must not overlap.
  void apply(std::span<const double> in, std::span<double> out) const;
  [[nodiscard]] std::vector<double> apply(std::span<const double> in) const;

 private:
  void apply_classical(std::span<const double> in, std::span<double> out) const;
  void apply_l1(std::span<const double> in, std::span<double> out) const;

  std::size_t n_;
  double dx_;
  FractionalOrder order_;
  double scale_ = 1.0;                // dx^-a / Gamma(2-a)
  std::vector<double> increments_;    // (m+1)^(1-a) - m^(1-a)
  std::size_t n_start_ = 0;           // number of starting weights per node
  std::vector<double> start_weights_; // (N+1) x n_start_, row major
};

/// Jumarie derivative at every node of `samples` (x0 must be 0, N >= 4).
Samples1D jumarie_derivative_grid(const Samples1D& samples, FractionalOrder order,
                                  const GridDerivativeOptions& options = {});

// ---------------------------------------------------------------------------
// Smooth integrals.

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
};

/// Signed definite integral of a smooth integrand by globally adaptive 15-point
/// Gauss-Kronrod bisection. Throws QuadratureError when the tolerance is not met
/// within the subdivision budget.
AdaptiveResult integrate_adaptive(const RealFunction& f, double lower, double upper, const Tolerance& tol,
                                  std::size_t max_subdivisions);

/// Product-rule weights w_0..w_N such that sum w_j f(j x/N) approximates
/// I^beta f(x) for the piecewise-linear interpolant of f. beta > 0.
std::vector<double> product_rule_weights(double beta, double x, int n_panels);

}  // namespace fracwave::ops
