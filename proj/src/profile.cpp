#include "stratres/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratres/errors.hpp"

namespace stratres {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(field, "must be a positive finite number, got " + std::to_string(v));
  }
}

// Horner evaluation of p, p', p''.
Jet poly_jet(const std::vector<double>& coeffs, double z) {
  Jet j;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    j.d2 = j.d2 * z + 2.0 * j.d1;
    j.d1 = j.d1 * z + j.value;
    j.value = j.value * z + *it;
  }
  return j;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

HalfSpace::HalfSpace(double rho, double chi) : rho_(rho), chi_(chi) {
  require_positive(rho, "rho");
  require_positive(chi, "chi");
  c_ = std::sqrt(chi_ / rho_);
  m_ = std::sqrt(c_ / chi_);
}

HalfSpace HalfSpace::from_speed_and_m(double c, double m) {
  require_positive(c, "c");
  require_positive(m, "m");
  return HalfSpace(1.0 / (c * m * m), c / (m * m));
}

LayerProfile::LayerProfile(double thickness, LayerRepresentation rep)
    : h_(thickness), rep_(std::move(rep)) {
  require_positive(h_, "layer.thickness");
  breaks_ = {0.0, h_};

  std::visit(
      overloaded{
          [&](const ConstantLayer& l) {
            require_positive(l.c, "layer.c");
            require_positive(l.m, "layer.m");
          },
          [&](const PolynomialLayer& l) {
            if (l.c_coeffs.empty()) throw ValidationError("layer.c", "empty coefficient list");
            if (l.m_coeffs.empty()) throw ValidationError("layer.m", "empty coefficient list");
          },
          [&](const SplineLayer& l) {
            const auto& kc = l.c.knots();
            const auto& km = l.m.knots();
            if (kc.size() < 4 || km.size() < 4) {
              throw ValidationError("layer.samples", "spline mode needs at least 4 samples");
            }
            if (std::abs(kc.front()) > 1e-12 * h_ || std::abs(kc.back() - h_) > 1e-12 * h_) {
              throw ValidationError("layer.samples", "samples must span exactly [0, thickness]");
            }
            breaks_.insert(breaks_.end(), kc.begin() + 1, kc.end() - 1);
            breaks_.insert(breaks_.end(), km.begin() + 1, km.end() - 1);
          },
          [&](const StackLayer& l) {
            if (l.sublayers.empty()) throw ValidationError("layer.sublayers", "empty stack");
            double z = 0.0;
            for (const auto& s : l.sublayers) {
              require_positive(s.thickness, "layer.sublayers.thickness");
              require_positive(s.c, "layer.sublayers.c");
              require_positive(s.m, "layer.sublayers.m");
              z += s.thickness;
              breaks_.push_back(z);
            }
            if (std::abs(z - h_) > 1e-12 * h_) {
              throw ValidationError("layer.thickness", "does not equal the sum of sublayer thicknesses");
            }
            breaks_.pop_back();
          },
      },
      rep_);

  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end(),
                            [&](double a, double b) { return std::abs(a - b) <= 1e-14 * h_; }),
                breaks_.end());

  // Positivity of c and m over the closed interval, checked on a dense grid
  // refined inside every piece.
  for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
    constexpr int kPerPiece = 64;
    for (int i = 0; i <= kPerPiece; ++i) {
      const double z = breaks_[p] + (breaks_[p + 1] - breaks_[p]) * i / kPerPiece;
      const auto lc = at(z);
      if (!(lc.c > 0.0)) throw ValidationError("layer.c", "must stay positive on [0, thickness]");
      if (!(lc.m > 0.0)) throw ValidationError("layer.m", "must stay positive on [0, thickness]");
    }
  }
}

LocalCoefficients LayerProfile::at(double z) const {
  z = std::clamp(z, 0.0, h_);
  return std::visit(
      overloaded{
          [](const ConstantLayer& l) { return LocalCoefficients{l.c, 0.0, l.m, 0.0, 0.0}; },
          [&](const PolynomialLayer& l) {
            const Jet c = poly_jet(l.c_coeffs, z);
            const Jet m = poly_jet(l.m_coeffs, z);
            return LocalCoefficients{c.value, c.d1, m.value, m.d1, m.d2};
          },
          [&](const SplineLayer& l) {
            const Jet c = l.c(z);
            const Jet m = l.m(z);
            return LocalCoefficients{c.value, c.d1, m.value, m.d1, m.d2};
          },
          [&](const StackLayer& l) {
            // Sublayer containing z; interfaces belong to the lower sublayer
            // except z = h, which belongs to the last one.
            double top = 0.0;
            for (std::size_t i = 0; i < l.sublayers.size(); ++i) {
              const auto& s = l.sublayers[i];
              if (z < top + s.thickness || i + 1 == l.sublayers.size()) {
                return LocalCoefficients{s.c, 0.0, s.m, 0.0, 0.0};
              }
              top += s.thickness;
            }
            return LocalCoefficients{};
          },
      },
      rep_);
}

bool LayerProfile::piecewise_constant() const noexcept {
  return std::holds_alternative<ConstantLayer>(rep_) || std::holds_alternative<StackLayer>(rep_);
}

bool LayerProfile::smooth_interior() const noexcept {
  if (const auto* s = std::get_if<StackLayer>(&rep_)) return s->sublayers.size() == 1;
  return true;
}

MediumModel::MediumModel(HalfSpace left, LayerProfile layer, HalfSpace right)
    : left_(left), layer_(std::move(layer)), right_(right) {}

Material eval_material(const MediumModel& model, double z) {
  double c = 0.0, m = 0.0;
  if (z < 0.0) {
    c = model.left().c();
    m = model.left().m();
  } else if (z > model.thickness()) {
    c = model.right().c();
    m = model.right().m();
  } else {
    const auto lc = model.layer().at(z);
    c = lc.c;
    m = lc.m;
  }
  const double m2 = m * m;
  return Material{1.0 / (c * m2), c / m2, c, m};
}

EndpointData endpoint_data(const MediumModel& model) {
  const auto lo = model.layer().at(0.0);
  const auto hi = model.layer().at(model.thickness());
  EndpointData d{};
  d.m0 = model.left().m();
  d.m1 = model.right().m();
  d.m_minus = lo.m;
  d.m_plus = hi.m;
  d.dm_minus = lo.dm;
  d.dm_plus = hi.dm;
  d.d2m_minus = lo.d2m;
  d.d2m_plus = hi.d2m;
  d.chi0 = model.left().chi();
  d.chi1 = model.right().chi();
  d.chi_minus = lo.c / (lo.m * lo.m);
  d.chi_plus = hi.c / (hi.m * hi.m);
  d.c0 = model.left().c();
  d.c1 = model.right().c();
  d.c_minus = lo.c;
  d.c_plus = hi.c;
  d.dc_minus = lo.dc;
  d.dc_plus = hi.dc;
  return d;
}

std::string_view to_string(SmoothnessTag tag) noexcept {
  switch (tag) {
    case SmoothnessTag::CaseI: return "CaseI";
    case SmoothnessTag::CaseII: return "CaseII";
    case SmoothnessTag::CaseIII: return "CaseIII";
    case SmoothnessTag::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

SmoothnessCase classify_smoothness(const EndpointData& d, double tol) {
  if (!(tol > 0.0)) throw DomainError("classification tolerance must be positive");
  SmoothnessCase out{SmoothnessTag::Unclassified, tol};

  const bool jump_left = std::abs(d.m_minus - d.m0) > tol;
  const bool jump_right = std::abs(d.m_plus - d.m1) > tol;
  if (jump_left && jump_right) {
    out.tag = SmoothnessTag::CaseI;
    return out;
  }
  if (jump_left || jump_right) return out;  // one-sided jump: no law applies

  const bool kink_left = std::abs(d.dm_minus) > tol;
  const bool kink_right = std::abs(d.dm_plus) > tol;
  if (kink_left && kink_right) {
    out.tag = SmoothnessTag::CaseII;
  } else if (!kink_left && !kink_right && d.d2m_minus * d.d2m_plus > tol) {
    out.tag = SmoothnessTag::CaseIII;
  }
  return out;
}

}  // namespace stratres
