#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "stratres/profile.hpp"
#include "stratres/profile_io.hpp"

namespace testing {

using stratres::HalfSpace;
using stratres::LayerProfile;
using stratres::MediumModel;

inline constexpr double kPi = std::numbers::pi;

inline std::string profile_path(const std::string& name) {
  return std::string(STRATRES_PROFILE_DIR) + "/" + name + ".json";
}

inline MediumModel load(const std::string& name) { return stratres::load_profile(profile_path(name)); }

inline MediumModel constant_layer(double m_left, double m_layer, double m_right, double c = 1.0,
                                  double h = 1.0) {
  return MediumModel(HalfSpace::from_speed_and_m(c, m_left),
                     LayerProfile(h, stratres::ConstantLayer{c, m_layer}),
                     HalfSpace::from_speed_and_m(c, m_right));
}

// Ξ = 9 with τ = 1: m₀² = m₁² = 2 m₋² = 2 m₊².
inline MediumModel xi9() { return constant_layer(std::sqrt(2.0), 1.0, std::sqrt(2.0)); }

inline MediumModel trivial() { return constant_layer(1.0, 1.0, 1.0); }

inline double rel_err(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::abs(b);
}

}  // namespace testing
