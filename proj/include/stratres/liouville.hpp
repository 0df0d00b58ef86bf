#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "stratres/profile.hpp"

namespace stratres {

/// tau = ∫_0^h dz / c(z), adaptive Gauss–Kronrod on each smooth piece.
double travel_time(const MediumModel& model);

/// Travel-time coordinate y(z) = ∫_0^z dz'/c(z') on [0, h] and its inverse.
/// Convention: y_minus = 0, y_plus = tau.
class TravelTimeChart {
public:
  explicit TravelTimeChart(const MediumModel& model);

  double y_minus() const noexcept { return 0.0; }
  double y_plus() const noexcept { return tau_; }
  double tau() const noexcept { return tau_; }

  /// Clamped to [0, h].
  double y_of_z(double z) const;
  /// Clamped to [0, tau].
  double z_of_y(double y) const;

  const MediumModel& model() const noexcept { return model_; }

private:
  MediumModel model_;
  std::vector<double> z_nodes_;
  std::vector<double> y_nodes_;
  double tau_ = 0.0;
};

TravelTimeChart liouville_map(const MediumModel& model);

/// V(y) = -(1/m) [ (c² χ'/χ) m' + c² m'' ] at z = z(y), with χ' taken from
/// the (c, m) parameterization. Exactly 0 outside [y_minus, y_plus]; the
/// endpoints carry the one-sided limits from inside the layer.
/// Throws DomainError for stacks with interior interfaces.
double potential(const MediumModel& model, const TravelTimeChart& chart, double y);

/// Pointwise potential from local coefficients (no chart lookup).
double potential_at(const LocalCoefficients& lc);

/// Solution samples of the original equation: U and P = χ dU/dz at z.
struct JostSamples {
  std::vector<double> z;
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> p;
};

/// z-points giving a uniform grid y_k = k tau / n, k = 0..n.
std::vector<double> uniform_travel_time_grid(const TravelTimeChart& chart, int n);

/// Maps U to phi = U/m and measures the residual of -phi'' + V phi = omega² phi.
///
/// phi' (in y) is formed from U and P exactly; phi'' is a sixth-order central
/// difference of phi' on the uniform y-grid, so the result tests both the
/// transform and the accuracy of the supplied samples. Returned value is
/// max_k |residual_k| / max_k |omega² phi_k| over the interior nodes.
/// Samples must lie on uniform_travel_time_grid; omega must be nonzero.
double verify_transform(const MediumModel& model, const TravelTimeChart& chart,
                        std::complex<double> omega, const JostSamples& samples);

/// Writes "y,z,V" rows on a uniform y-grid with n intervals.
void write_chart_csv(std::ostream& out, const MediumModel& model,
                     const TravelTimeChart& chart, int n);

}  // namespace stratres
