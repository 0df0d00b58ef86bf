#pragma once

#include <span>
#include <vector>

namespace stratres {

/// Value and first two derivatives of an interpolant at one abscissa.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// C² cubic spline on strictly increasing knots with prescribed end slopes.
///
/// The end slopes are part of the data: one-sided derivatives at the
/// boundary knots are exactly the prescribed ones, and the one-sided second
/// derivatives follow from the interpolation system.
class ClampedCubicSpline {
public:
  ClampedCubicSpline() = default;
  ClampedCubicSpline(std::span<const double> x, std::span<const double> y,
                     double slope_left, double slope_right);

  /// Evaluates on [x_front, x_back]; outside, the end pieces are extended.
  Jet operator()(double x) const;

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return y_; }
  double slope_left() const noexcept { return slope_left_; }
  double slope_right() const noexcept { return slope_right_; }

private:
  std::vector<double> x_, y_;
  std::vector<double> m2_;  // second derivatives at the knots
  double slope_left_ = 0.0;
  double slope_right_ = 0.0;
};

/// Derivative at x[0] of the cubic through the first four samples.
/// Used as the default clamped slope when the caller does not supply one.
double four_point_end_slope(std::span<const double> x,
                            std::span<const double> y, bool left_end);

}  // namespace stratres
