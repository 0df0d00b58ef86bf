#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "stratres/spline.hpp"

namespace stratres {

/// Homogeneous half-space. Stored as (rho, chi); c and m are derived.
class HalfSpace {
public:
  HalfSpace(double rho, double chi);
  static HalfSpace from_speed_and_m(double c, double m);

  double rho() const noexcept { return rho_; }
  double chi() const noexcept { return chi_; }
  double c() const noexcept { return c_; }
  double m() const noexcept { return m_; }

private:
  double rho_, chi_, c_, m_;
};

/// c(z), m(z) and the derivatives the spectral formulas need.
struct LocalCoefficients {
  double c = 0.0;
  double dc = 0.0;
  double m = 0.0;
  double dm = 0.0;
  double d2m = 0.0;
};

struct ConstantLayer {
  double c;
  double m;
};

/// Coefficients are in ascending powers of z (z in [0, h]).
struct PolynomialLayer {
  std::vector<double> c_coeffs;
  std::vector<double> m_coeffs;
};

struct SplineLayer {
  ClampedCubicSpline c;
  ClampedCubicSpline m;
};

struct Sublayer {
  double thickness;
  double c;
  double m;
};

/// Finite stack of constant sublayers, listed from z = 0 downward.
struct StackLayer {
  std::vector<Sublayer> sublayers;
};

using LayerRepresentation = std::variant<ConstantLayer, PolynomialLayer, SplineLayer, StackLayer>;

/// Layer occupying (0, h), parameterized canonically by (c(z), m(z)).
class LayerProfile {
public:
  LayerProfile(double thickness, LayerRepresentation rep);

  double thickness() const noexcept { return h_; }
  const LayerRepresentation& representation() const noexcept { return rep_; }

  /// Coefficients at z, clamped to [0, h]. At z = 0 and z = h the one-sided
  /// values from inside the layer are returned.
  LocalCoefficients at(double z) const;

  /// 0, h and every interior point where the representation changes piece
  /// (spline knots, sublayer interfaces), sorted ascending.
  const std::vector<double>& breakpoints() const noexcept { return breaks_; }

  /// True for the constant and stack representations.
  bool piecewise_constant() const noexcept;
  /// True when the layer is C² on (0, h); false for stacks with interfaces.
  bool smooth_interior() const noexcept;

private:
  double h_;
  LayerRepresentation rep_;
  std::vector<double> breaks_;
};

struct Material {
  double rho, chi, c, m;
};

/// Full problem datum: left half-space (z < 0), layer, right half-space (z > h).
/// Immutable after construction.
class MediumModel {
public:
  MediumModel(HalfSpace left, LayerProfile layer, HalfSpace right);

  const HalfSpace& left() const noexcept { return left_; }
  const HalfSpace& right() const noexcept { return right_; }
  const LayerProfile& layer() const noexcept { return layer_; }
  double thickness() const noexcept { return layer_.thickness(); }

private:
  HalfSpace left_;
  LayerProfile layer_;
  HalfSpace right_;
};

Material eval_material(const MediumModel& model, double z);

/// One-sided limits at the two interfaces together with the half-space values.
/// "minus" is z = 0+, "plus" is z = h-.
struct EndpointData {
  double m0, m1, m_minus, m_plus;
  double dm_minus, dm_plus;
  double d2m_minus, d2m_plus;
  double chi0, chi1, chi_minus, chi_plus;
  double c0, c1, c_minus, c_plus;
  double dc_minus, dc_plus;
};

EndpointData endpoint_data(const MediumModel& model);

enum class SmoothnessTag { CaseI, CaseII, CaseIII, Unclassified };

std::string_view to_string(SmoothnessTag tag) noexcept;

struct SmoothnessCase {
  SmoothnessTag tag = SmoothnessTag::Unclassified;
  double tolerance = 0.0;
};

inline constexpr double kDefaultClassificationTol = 1e-9;

SmoothnessCase classify_smoothness(const EndpointData& data,
                                   double tol = kDefaultClassificationTol);

}  // namespace stratres
