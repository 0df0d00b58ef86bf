#include "stratres/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "stratres/errors.hpp"
#include "stratres/format.hpp"

namespace stratres {

namespace {

constexpr double kQuadTol = 1e-12;
constexpr int kChartPanelsPerPiece = 32;

double slowness_integral(const LayerProfile& layer, double a, double b, unsigned max_depth = 15) {
  if (b <= a) return 0.0;
  auto f = [&](double z) { return 1.0 / layer.at(z).c; };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, kQuadTol,
                                                                        &err);
}

// Inside one chart panel the integrand is smooth and the panel is short, so a
// single Kronrod rule is exact to rounding. Adaptive refinement would chase a
// relative tolerance on near-empty intervals that root finding probes.
double panel_integral(const LayerProfile& layer, double a, double b) {
  return slowness_integral(layer, a, b, 0);
}

}  // namespace

double travel_time(const MediumModel& model) {
  const auto& br = model.layer().breakpoints();
  // Piece integrals summed in order; each piece integrand is smooth.
  double tau = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    tau += slowness_integral(model.layer(), br[i], br[i + 1]);
  }
  return tau;
}

TravelTimeChart::TravelTimeChart(const MediumModel& model) : model_(model) {
  const auto& br = model_.layer().breakpoints();
  z_nodes_.push_back(0.0);
  y_nodes_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    for (int k = 1; k <= kChartPanelsPerPiece; ++k) {
      const double z = k == kChartPanelsPerPiece
                           ? br[i + 1]
                           : br[i] + (br[i + 1] - br[i]) * k / kChartPanelsPerPiece;
      y_nodes_.push_back(y_nodes_.back() + slowness_integral(model_.layer(), z_nodes_.back(), z));
      z_nodes_.push_back(z);
    }
  }
  tau_ = y_nodes_.back();
}

double TravelTimeChart::y_of_z(double z) const {
  z = std::clamp(z, 0.0, model_.thickness());
  auto it = std::upper_bound(z_nodes_.begin(), z_nodes_.end(), z);
  const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - z_nodes_.begin() - 1, 0));
  if (k + 1 >= z_nodes_.size()) return tau_;
  return y_nodes_[k] + panel_integral(model_.layer(), z_nodes_[k], z);
}

double TravelTimeChart::z_of_y(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= tau_) return model_.thickness();
  auto it = std::upper_bound(y_nodes_.begin(), y_nodes_.end(), y);
  const std::size_t k = static_cast<std::size_t>(it - y_nodes_.begin() - 1);
  if (y == y_nodes_[k]) return z_nodes_[k];
  auto f = [&](double z) { return y_nodes_[k] + panel_integral(model_.layer(), z_nodes_[k], z) - y; };
  std::uintmax_t iters = 100;
  const auto bracket = boost::math::tools::toms748_solve(
      f, z_nodes_[k], z_nodes_[k + 1], f(z_nodes_[k]), f(z_nodes_[k + 1]),
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (bracket.first + bracket.second);
}

TravelTimeChart liouville_map(const MediumModel& model) { return TravelTimeChart(model); }

double potential_at(const LocalCoefficients& lc) {
  // chi = c/m², so chi'/chi = c'/c - 2 m'/m.
  const double chi_log_slope = lc.dc / lc.c - 2.0 * lc.dm / lc.m;
  const double c2 = lc.c * lc.c;
  return -(c2 * chi_log_slope * lc.dm + c2 * lc.d2m) / lc.m;
}

double potential(const MediumModel& model, const TravelTimeChart& chart, double y) {
  if (!model.layer().smooth_interior()) {
    throw DomainError("potential is undefined for layers with interior interfaces");
  }
  if (y < chart.y_minus() || y > chart.y_plus()) return 0.0;
  return potential_at(model.layer().at(chart.z_of_y(y)));
}

std::vector<double> uniform_travel_time_grid(const TravelTimeChart& chart, int n) {
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) z[static_cast<std::size_t>(k)] = chart.z_of_y(chart.tau() * k / n);
  return z;
}

double verify_transform(const MediumModel& model, const TravelTimeChart& chart,
                        std::complex<double> omega, const JostSamples& s) {
  if (omega == 0.0) throw DomainError("verify_transform: omega must be nonzero");
  const std::size_t n = s.z.size();
  if (n < 8 || s.u.size() != n || s.p.size() != n) {
    throw DomainError("verify_transform: need at least 8 consistent samples");
  }
  const double dy = chart.tau() / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(chart.y_of_z(s.z[k]) - dy * static_cast<double>(k)) > 1e-9 * chart.tau()) {
      throw DomainError("verify_transform: samples are not on a uniform travel-time grid");
    }
  }

  std::vector<std::complex<double>> phi(n), dphi(n);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto lc = model.layer().at(s.z[k]);
    phi[k] = s.u[k] / lc.m;
    // dphi/dy = c (U'/m - U m'/m²) with U' = P m²/c.
    dphi[k] = s.p[k] * lc.m - lc.c * s.u[k] * lc.dm / (lc.m * lc.m);
    v[k] = potential_at(lc);
  }

  const std::complex<double> w2 = omega * omega;
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 3; k + 3 < n; ++k) {
    const auto d2phi = (-dphi[k - 3] + 9.0 * dphi[k - 2] - 45.0 * dphi[k - 1] +
                        45.0 * dphi[k + 1] - 9.0 * dphi[k + 2] + dphi[k + 3]) /
                       (60.0 * dy);
    const auto res = -d2phi + (v[k] - w2) * phi[k];
    worst = std::max(worst, std::abs(res));
    scale = std::max(scale, std::abs(w2 * phi[k]));
  }
  return worst / scale;
}

void write_chart_csv(std::ostream& out, const MediumModel& model,
                     const TravelTimeChart& chart, int n) {
  out << "y,z,V\n";
  for (int k = 0; k <= n; ++k) {
    const double y = chart.tau() * k / n;
    const double z = chart.z_of_y(y);
    out << format_double(y) << ',' << format_double(z) << ','
        << format_double(potential_at(model.layer().at(z))) << '\n';
  }
}

}  // namespace stratres
