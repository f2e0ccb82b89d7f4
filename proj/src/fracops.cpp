#include "fracwave/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracwave::ops {

void QuadratureConfig::validate() const {
  if (n_panels < 8) throw DomainError("QuadratureConfig: n_panels must be at least 8");
  if (max_subdivisions == 0) throw DomainError("QuadratureConfig: max_subdivisions must be positive");
}

Samples1D::Samples1D(double x0, double dx, std::vector<double> values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("Samples1D: dx must be positive");
  if (values_.size() < 3) throw DomainError("Samples1D: need at least two intervals");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("Samples1D: samples must be finite");
  }
}

Samples1D Samples1D::from_function(const RealFunction& f, double x0, double x_max, std::size_t intervals) {
  if (intervals < 2) throw DomainError("Samples1D: need at least two intervals");
  const double dx = (x_max - x0) / static_cast<double>(intervals);
  std::vector<double> values(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    values[i] = f(i == intervals ? x_max : x0 + static_cast<double>(i) * dx);
  }
  return Samples1D(x0, dx, std::move(values));
}

namespace {

// sum_{k >= k0} C(p, k) y^k, for |y| <= 1/16.
double binomial_tail(double p, double y, int k0) {
  double coef = 1.0;
  double ypow = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 80; ++k) {
    coef *= (p - (k - 1)) / k;
    ypow *= y;
    if (coef == 0.0) break;
    if (k < k0) continue;
    const double term = coef * ypow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

constexpr int kSeriesThreshold = 16;

// (m+1)^p - 2 m^p + (m-1)^p for m >= 1.
double second_difference_power(double p, int m) {
  if (m < kSeriesThreshold) {
    const double md = m;
    return std::pow(md + 1.0, p) - 2.0 * std::pow(md, p) + std::pow(md - 1.0, p);
  }
  const double inv = 1.0 / m;
  return std::pow(static_cast<double>(m), p) * (binomial_tail(p, inv, 2) + binomial_tail(p, -inv, 2));
}

// (n-1)^p - (n-p) n^(p-1): weight of the node at the lower terminal.
double start_weight(double p, int n) {
  if (n < kSeriesThreshold) {
    const double nd = n;
    return std::pow(nd - 1.0, p) - (nd - p) * std::pow(nd, p - 1.0);
  }
  return std::pow(static_cast<double>(n), p) * binomial_tail(p, -1.0 / n, 2);
}

// (m+1)^q - m^q.
double first_difference_power(double q, std::size_t m) {
  if (m == 0) return 1.0;
  const double md = static_cast<double>(m);
  return std::pow(md, q) * std::expm1(q * std::log1p(1.0 / md));
}

double product_integral(const RealFunction& f, double beta, double x, int n_panels) {
  if (x == 0.0) return 0.0;
  const auto w = product_rule_weights(beta, x, n_panels);
  const double h = x / n_panels;
  double sum = 0.0;
  for (int j = 0; j <= n_panels; ++j) {
    sum += w[j] * f(j == n_panels ? x : j * h);
  }
  if (!std::isfinite(sum)) throw QuadratureError("product integration produced a non-finite value");
  return sum;
}

double step_for(double x) { return std::max(std::abs(x) * 1e-5, 1e-8); }

// Central difference, or a second-order forward difference when the left stencil
// point would leave [0, inf).
double differentiate(const RealFunction& g, double x) {
  const double h = step_for(x);
  if (x - h < 0.0) {
    return (-3.0 * g(x) + 4.0 * g(x + h) - g(x + 2.0 * h)) / (2.0 * h);
  }
  return (g(x + h) - g(x - h)) / (2.0 * h);
}

void check_point(double x, const char* who) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError(std::string(who) + ": evaluation point must be finite and non-negative");
  }
}

RealFunction wrap(const expr::Expression& e) {
  return [e](double s) { return expr::evaluate(e, s); };
}

double rl_derivative_kernel(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  if (order.is_classical()) return differentiate(f, x);
  const double beta = 1.0 - order.value();
  return differentiate([&](double y) { return product_integral(f, beta, y, cfg.n_panels); }, x);
}

}  // namespace

std::vector<double> product_rule_weights(double beta, double x, int n_panels) {
  if (!(beta > 0.0)) throw DomainError("product_rule_weights: order must be positive");
  if (n_panels < 1) throw DomainError("product_rule_weights: need at least one panel");
  const double p = beta + 1.0;
  const double h = x / n_panels;
  const double prefactor = std::pow(h, beta) / gamma(beta + 2.0);
  std::vector<double> w(static_cast<std::size_t>(n_panels) + 1);
  w[0] = prefactor * start_weight(p, n_panels);
  for (int j = 1; j < n_panels; ++j) {
    w[j] = prefactor * second_difference_power(p, n_panels - j);
  }
  w[n_panels] = prefactor;
  return w;
}

double rl_integral(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  check_point(x, "rl_integral");
  return product_integral(f, order.value(), x, cfg.n_panels);
}

double rl_integral(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  return rl_integral(wrap(f), order, x, cfg);
}

double rl_derivative(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  check_point(x, "rl_derivative");
  if (x == 0.0 && !order.is_classical()) {
    throw DomainError("rl_derivative: undefined at the lower terminal for 0 < alpha < 1");
  }
  return rl_derivative_kernel(f, order, x, cfg);
}

double rl_derivative(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  return rl_derivative(wrap(f), order, x, cfg);
}

double caputo_derivative(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  check_point(x, "caputo_derivative");
  if (order.is_classical()) return differentiate(f, x);
  const RealFunction fprime = [&](double s) { return differentiate(f, s); };
  return product_integral(fprime, 1.0 - order.value(), x, cfg.n_panels);
}

double caputo_derivative(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  return caputo_derivative(wrap(f), order, x, cfg);
}

double jumarie_derivative(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  check_point(x, "jumarie_derivative");
  const double f0 = f(0.0);
  return rl_derivative_kernel([&](double s) { return f(s) - f0; }, order, x, cfg);
}

double jumarie_derivative(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  check_point(x, "jumarie_derivative");
  const auto shifted = f - expr::Expression::literal(expr::evaluate(f, 0.0));
  return rl_derivative_kernel(wrap(shifted), order, x, cfg);
}

double integral_dx_alpha(const RealFunction& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  return gamma(1.0 + order.value()) * rl_integral(f, order, x, cfg);
}

double integral_dx_alpha(const expr::Expression& f, FractionalOrder order, double x, const QuadratureConfig& cfg) {
  return integral_dx_alpha(wrap(f), order, x, cfg);
}

// ---------------------------------------------------------------------------
// Gridded operator

std::vector<double> scaled_power_exponents(FractionalOrder order, double limit) {
  std::vector<double> out;
  if (order.is_classical()) return out;
  const double a = order.value();
  for (int k = 1; k * a < limit - 1e-12; ++k) {
    out.push_back(k * a);
  }
  return out;
}

namespace {

// Solves A X = B in place for a small dense system (A is k x k, B is k x m, both
// row major). Partial pivoting.
void solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t k, std::size_t m) {
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
    }
    if (a[pivot * k + col] == 0.0) throw DomainError("starting-weight system is singular");
    if (pivot != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[pivot * k + c]);
      for (std::size_t c = 0; c < m; ++c) std::swap(b[col * m + c], b[pivot * m + c]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const double factor = a[r * k + col] / a[col * k + col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < k; ++c) a[r * k + c] -= factor * a[col * k + c];
      for (std::size_t c = 0; c < m; ++c) b[r * m + c] -= factor * b[col * m + c];
    }
  }
  for (std::size_t col = k; col-- > 0;) {
    for (std::size_t c = 0; c < m; ++c) {
      double s = b[col * m + c];
      for (std::size_t j = col + 1; j < k; ++j) s -= a[col * k + j] * b[j * m + c];
      b[col * m + c] = s / a[col * k + col];
    }
  }
}

// sum_{k=0}^{i-1} inc[i-1-k] * (v[k+1] - v[k]) for every node i.
void l1_sums(const std::vector<double>& inc, std::span<const double> v, std::span<double> out) {
  const std::size_t n = v.size() - 1;
  std::vector<double> dv(n);
  for (std::size_t k = 0; k < n; ++k) dv[k] = v[k + 1] - v[k];
  out[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < i; ++k) s += inc[i - 1 - k] * dv[k];
    out[i] = s;
  }
}

}  // namespace

JumarieGridOperator::JumarieGridOperator(std::size_t intervals, double dx, FractionalOrder order,
                                         GridDerivativeOptions options)
    : n_(intervals), dx_(dx), order_(order) {
  if (intervals < 4) throw DomainError("gridded derivative needs at least four intervals");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("gridded derivative needs dx > 0");
  if (order.is_classical()) return;

  const double a = order.value();
  const double q = 1.0 - a;
  const double g2 = gamma(2.0 - a);
  scale_ = std::pow(dx, -a) / g2;
  increments_.resize(n_);
  for (std::size_t m = 0; m < n_; ++m) increments_[m] = first_difference_power(q, m);

  auto& exps = options.singular_exponents;
  n_start_ = exps.size();
  if (n_start_ == 0) return;
  if (n_start_ > n_) throw DomainError("more starting exponents than grid intervals");
  for (std::size_t r = 0; r < n_start_; ++r) {
    if (!(exps[r] >= a)) throw DomainError("starting exponents must be at least alpha");
    for (std::size_t s = 0; s < r; ++s) {
      if (std::abs(exps[r] - exps[s]) < 1e-8) throw DomainError("starting exponents must be distinct");
    }
  }

  // Unit grid: residual of the plain rule on t^s at every node, then the weights on
  // nodes 1..K that remove it.
  const std::size_t k = n_start_;
  const std::size_t cols = n_ + 1;
  std::vector<double> matrix(k * k);
  std::vector<double> rhs(k * cols);
  std::vector<double> powers(cols);
  std::vector<double> plain(cols);
  for (std::size_t r = 0; r < k; ++r) {
    const double s = exps[r];
    for (std::size_t m = 0; m < cols; ++m) powers[m] = std::pow(static_cast<double>(m), s);
    l1_sums(increments_, powers, plain);
    const double coef = gamma(s + 1.0) / gamma(s + 1.0 - a);
    for (std::size_t i = 0; i < cols; ++i) {
      const double exact = coef * std::pow(static_cast<double>(i), s - a);
      rhs[r * cols + i] = exact - plain[i] / g2;
    }
    for (std::size_t m = 0; m < k; ++m) matrix[r * k + m] = powers[m + 1];
  }
  solve_dense(matrix, rhs, k, cols);

  const double dx_scale = std::pow(dx, -a);
  start_weights_.resize(cols * k);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t m = 0; m < k; ++m) start_weights_[i * k + m] = dx_scale * rhs[m * cols + i];
  }
}

void JumarieGridOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ + 1 || out.size() != n_ + 1) {
    throw DomainError("gridded derivative: sample count does not match the operator");
  }
  if (order_.is_classical()) {
    apply_classical(in, out);
  } else {
    apply_l1(in, out);
  }
}

std::vector<double> JumarieGridOperator::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply(in, out);
  return out;
}

void JumarieGridOperator::apply_classical(std::span<const double> in, std::span<double> out) const {
  // Fourth-order stencils: centred in the interior, one-sided on two nodes at each end.
  const std::size_t n = n_;
  const double inv = 1.0 / (12.0 * dx_);
  for (std::size_t i = 2; i + 2 <= n; ++i) {
    out[i] = (in[i - 2] - 8.0 * in[i - 1] + 8.0 * in[i + 1] - in[i + 2]) * inv;
  }
  out[0] = (-25.0 * in[0] + 48.0 * in[1] - 36.0 * in[2] + 16.0 * in[3] - 3.0 * in[4]) * inv;
  out[1] = (-3.0 * in[0] - 10.0 * in[1] + 18.0 * in[2] - 6.0 * in[3] + in[4]) * inv;
  out[n - 1] = (3.0 * in[n] + 10.0 * in[n - 1] - 18.0 * in[n - 2] + 6.0 * in[n - 3] - in[n - 4]) * inv;
  out[n] = (25.0 * in[n] - 48.0 * in[n - 1] + 36.0 * in[n - 2] - 16.0 * in[n - 3] + 3.0 * in[n - 4]) * inv;
}

void JumarieGridOperator::apply_l1(std::span<const double> in, std::span<double> out) const {
  std::vector<double> v(in.begin(), in.end());
  const double base = v[0];
  for (double& value : v) value -= base;
  l1_sums(increments_, v, out);
  for (std::size_t i = 0; i <= n_; ++i) {
    double value = scale_ * out[i];
    for (std::size_t m = 0; m < n_start_; ++m) value += start_weights_[i * n_start_ + m] * v[m + 1];
    out[i] = value;
  }
}

Samples1D jumarie_derivative_grid(const Samples1D& samples, FractionalOrder order,
                                  const GridDerivativeOptions& options) {
  if (samples.x0() != 0.0) throw DomainError("gridded derivative requires samples starting at 0");
  const JumarieGridOperator op(samples.intervals(), samples.dx(), order, options);
  return Samples1D(0.0, samples.dx(), op.apply(samples.values()));
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod_segment(const RealFunction& f, double a, double b) {
  const auto& nodes = Kronrod::abscissa();
  const auto& kw = Kronrod::weights();
  const auto& gw = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kw[0];
  double gauss = fc * gw[0];
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double pair = f(mid + half * nodes[i]) + f(mid - half * nodes[i]);
    kronrod += pair * kw[i];
    if (i % 2 == 0) gauss += pair * gw[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) throw QuadratureError("integrand is not finite on the interval");
  const double error = std::max(std::abs(kronrod - gauss), 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, error};
}

}  // namespace

AdaptiveResult integrate_adaptive(const RealFunction& f, double lower, double upper, const Tolerance& tol,
                                  std::size_t max_subdivisions) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) throw DomainError("integration limits must be finite");
  if (lower == upper) return {};
  if (upper < lower) {
    auto r = integrate_adaptive(f, upper, lower, tol, max_subdivisions);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  Segment first = kronrod_segment(f, lower, upper);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  std::size_t count = 1;
  while (!tol.accepts(error, value)) {
    if (count >= max_subdivisions) {
      throw QuadratureError("adaptive quadrature did not reach tolerance within " + std::to_string(max_subdivisions) +
                            " subintervals (error estimate " + std::to_string(error) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("adaptive quadrature exhausted floating-point resolution");
    }
    const Segment left = kronrod_segment(f, worst.a, mid);
    const Segment right = kronrod_segment(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_error += heap.top().error;
    heap.pop();
  }
  return {total, total_error, count};
}

}  // namespace fracwave::ops
