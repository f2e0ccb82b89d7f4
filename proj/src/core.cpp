#include "fracwave/core.hpp"

#include <array>
#include <cmath>
#include <string>

namespace fracwave {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("fractional order must satisfy 0 < alpha <= 1, got " + std::to_string(alpha));
  }
}

Tolerance::Tolerance(double abs, double rel) : abs_tol(abs), rel_tol(rel) {
  if (!(abs >= 0.0) || !(rel >= 0.0)) {
    throw DomainError("tolerances must be non-negative");
  }
  if (abs == 0.0 && rel == 0.0) {
    throw DomainError("absolute and relative tolerance cannot both be zero");
  }
}

double Tolerance::bound_for(double value) const noexcept {
  return std::max(abs_tol, rel_tol * std::abs(value));
}

namespace {

// Lanczos coefficients for g = 671/128, 14 terms (Numerical Recipes, 3rd ed.).
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

constexpr double kLanczosShift = 5.24218750000000000;  // g + 1/2
constexpr double kSqrtTwoPi = 2.5066282746310005;

}  // namespace

double gamma(double z) {
  if (!std::isfinite(z) || z <= 0.0) {
    throw DomainError("gamma: argument must be finite and positive, got " + std::to_string(z));
  }
  if (z <= 21.0 && z == std::floor(z)) {
    double factorial = 1.0;  // exact for these arguments
    for (int k = 2; k < static_cast<int>(z); ++k) factorial *= k;
    return factorial;
  }
  double series = 0.999999999999997092;
  double denom = z;
  for (double c : kLanczos) {
    denom += 1.0;
    series += c / denom;
  }
  const double base = z + kLanczosShift;
  // Split the power so that large z does not overflow before the exponential damps it.
  const double half_power = std::pow(base, 0.5 * (z + 0.5));
  return kSqrtTwoPi * series / z * half_power * std::exp(-base) * half_power;
}

double euler_power_coefficient(double beta, FractionalOrder order) {
  const double alpha = order.value();
  if (!(beta > -1.0)) {
    throw DomainError("euler_power_coefficient: exponent must exceed -1");
  }
  if (!(beta + 1.0 - alpha > 0.0)) {
    throw DomainError("euler_power_coefficient: beta + 1 - alpha must be positive");
  }
  if (order.is_classical()) {
    return beta;  // Gamma(b+1)/Gamma(b) without the round-off of the ratio
  }
  return gamma(beta + 1.0) / gamma(beta + 1.0 - alpha);
}

}  // namespace fracwave
