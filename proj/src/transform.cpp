#include "fracwave/transform.hpp"

#include <cmath>

namespace fracwave::transform {

TransformSpec::TransformSpec(FractionalOrder order, double p, double q) : order_(order), p_(p), q_(q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("transform: scale factor p must be positive");
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("transform: scale factor q must be positive");
}

namespace {

double forward(double s, double scale, FractionalOrder order) {
  if (order.is_classical()) return scale * s;
  return std::pow(scale * s, order.value()) / gamma(1.0 + order.value());
}

double backward(double S, double scale, FractionalOrder order) {
  if (order.is_classical()) return S / scale;
  return std::pow(gamma(1.0 + order.value()) * S, 1.0 / order.value()) / scale;
}

}  // namespace

double scaled_coordinate(double s, FractionalOrder order) {
  if (!(s >= 0.0)) throw DomainError("scaled coordinate requires a non-negative argument");
  return forward(s, 1.0, order);
}

FractalCoords to_fractal(double x, double t, const TransformSpec& spec) {
  if (!(x >= 0.0) || !(t >= 0.0)) throw DomainError("to_fractal: x and t must be non-negative");
  return {forward(x, spec.p(), spec.order()), forward(t, spec.q(), spec.order())};
}

PhysicalCoords from_fractal(const FractalCoords& coords, const TransformSpec& spec) {
  if (!(coords.X >= 0.0) || !(coords.T >= 0.0)) throw DomainError("from_fractal: X and T must be non-negative");
  return {backward(coords.X, spec.p(), spec.order()), backward(coords.T, spec.q(), spec.order())};
}

double operator_scale(const TransformSpec& spec, Axis axis) {
  const double factor = axis == Axis::space ? spec.p() : spec.q();
  return std::pow(factor, spec.order().value());
}

}  // namespace fracwave::transform
