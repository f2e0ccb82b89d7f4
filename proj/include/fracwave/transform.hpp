#pragma once

#include "fracwave/core.hpp"

namespace fracwave::transform {

/// Fractional complex transform X = (p x)^a / Gamma(1+a), T = (q t)^a / Gamma(1+a).
class TransformSpec {
 public:
  explicit TransformSpec(FractionalOrder order, double p = 1.0, double q = 1.0);

  [[nodiscard]] FractionalOrder order() const noexcept { return order_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double q() const noexcept { return q_; }

 private:
  FractionalOrder order_;
  double p_;
  double q_;
};

struct FractalCoords {
  double X = 0.0;
  double T = 0.0;
};

struct PhysicalCoords {
  double x = 0.0;
  double t = 0.0;
};

enum class Axis { space, time };

/// Forward map on the closed first quadrant.
FractalCoords to_fractal(double x, double t, const TransformSpec& spec);

/// Inverse of to_fractal.
PhysicalCoords from_fractal(const FractalCoords& coords, const TransformSpec& spec);

/// Factor relating the order-a derivative to the first derivative in the scaled
/// coordinate: p^a for space, q^a for time.
double operator_scale(const TransformSpec& spec, Axis axis);

/// s^a / Gamma(1+a) for s >= 0: the scaled coordinate with unit scale factor.
double scaled_coordinate(double s, FractionalOrder order);

}  // namespace fracwave::transform
