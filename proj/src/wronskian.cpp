#include "stratres/wronskian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "stratres/errors.hpp"
#include "stratres/format.hpp"

namespace stratres {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kMaxSteps = 2'000'000;

template <std::size_t N>
using State = std::array<cplx, N>;

// Embedded RK7(8) from odeint with a local step controller, so that a
// failing integration can report the worst normalized error it saw.
// Error norm: components are grouped in (U, P) pairs; P is weighted by
// 1/impedance so both members of a pair are measured in the same units.
template <std::size_t N, class Rhs>
void integrate(Rhs&& rhs, State<N>& x, double z_from, double z_to,
               const std::vector<double>& breaks, const IntegratorTolerances& tol,
               double p_weight, double dz_hint) {
  boost::numeric::odeint::runge_kutta_fehlberg78<State<N>> stepper;
  // Coefficients are sampled strictly inside the current panel so that
  // stages at a panel end never see the neighbouring sublayer.
  double panel_lo = 0.0, panel_hi = 0.0;
  auto sys = [&](const State<N>& s, State<N>& ds, double z) {
    rhs(s, ds, std::clamp(z, panel_lo, panel_hi));
  };

  // Panel boundaries between z_from and z_to, in integration order.
  std::vector<double> stops;
  const double lo = std::min(z_from, z_to), hi = std::max(z_from, z_to);
  for (double b : breaks) {
    if (b > lo && b < hi) stops.push_back(b);
  }
  stops.push_back(z_to);
  const double dir = z_to < z_from ? -1.0 : 1.0;
  if (dir < 0) {
    std::sort(stops.begin(), stops.end(), std::greater<>());
  } else {
    std::sort(stops.begin(), stops.end());
  }

  auto norm = [&](const State<N>& a, const State<N>& b, const State<N>& err) {
    double e = 0.0;
    for (std::size_t g = 0; g < N; g += 2) {
      const double size = std::max({std::abs(a[g]), std::abs(a[g + 1]) * p_weight,
                                    std::abs(b[g]), std::abs(b[g + 1]) * p_weight});
      const double sc = tol.abs + tol.rel * size;
      e = std::max({e, std::abs(err[g]) / sc, std::abs(err[g + 1]) * p_weight / sc});
    }
    return e;
  };

  double z = z_from;
  double dz = dir * dz_hint;
  int steps = 0;
  State<N> out, err;
  for (double stop : stops) {
    const double span = std::abs(stop - z);
    const double inset = 1e-12 * span;
    panel_lo = std::min(z, stop) + inset;
    panel_hi = std::max(z, stop) - inset;
    const double min_step = 1e-14 * std::max(span, hi - lo);
    while (dir * (stop - z) > 0.0) {
      bool last = false;
      double h = dz;
      if (dir * (z + h - stop) >= 0.0 || std::abs(stop - (z + h)) < 1e-12 * span) {
        h = stop - z;
        last = true;
      }
      stepper.do_step(sys, x, z, out, h, err);
      const double e = norm(x, out, err);
      if (!std::isfinite(e)) {
        throw IntegrationError("non-finite state in Jost integration", e, z);
      }
      if (e <= 1.0) {
        x = out;
        z = last ? stop : z + h;
        const double grow = e == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(e, -1.0 / 8.0));
        // Keep the pre-truncation step as the proposal after landing on a stop.
        dz = (last ? std::max(std::abs(dz), std::abs(h)) : std::abs(h) * grow) * dir;
      } else {
        dz = h * std::max(0.2, 0.9 * std::pow(e, -1.0 / 7.0));
        if (std::abs(dz) < min_step) {
          throw IntegrationError("step size underflow in Jost integration (worst error " +
                                     format_double(e) + " at z=" + format_double(z) + ")",
                                 e, z);
        }
      }
      if (++steps > kMaxSteps) {
        throw IntegrationError("step budget exhausted in Jost integration", e, z);
      }
    }
  }
}

}  // namespace

WronskianEvaluator::WronskianEvaluator(MediumModel model, IntegratorTolerances tol,
                                       double depth_factor)
    : model_(std::move(model)), tol_(tol), depth_factor_(depth_factor), tau_(travel_time(model_)) {
  if (!(tol_.rel > 0.0) || !(tol_.abs > 0.0)) {
    throw DomainError("integrator tolerances must be positive");
  }
}

WronskianEvaluator WronskianEvaluator::with_tolerances(IntegratorTolerances tol) const {
  WronskianEvaluator copy = *this;
  copy.tol_ = tol;
  return copy;
}

void WronskianEvaluator::check_domain(cplx omega) const {
  if (!(std::abs(omega) >= omega_min())) {
    throw DomainError("|omega| = " + format_double(std::abs(omega)) +
                      " is below the threshold exclusion omega_min = " + format_double(omega_min()));
  }
  if (omega.imag() < -max_depth()) {
    throw DomainError("Im omega = " + format_double(omega.imag()) +
                      " is deeper than the configured scan depth -" + format_double(max_depth()));
  }
}

WronskianValue WronskianEvaluator::evaluate(cplx omega) const {
  check_domain(omega);
  const auto& layer = model_.layer();
  const double m0sq = model_.left().m() * model_.left().m();
  const double m1sq = model_.right().m() * model_.right().m();
  const cplx w = omega;
  const cplx w2 = w * w;

  auto rhs = [&](const State<4>& s, State<4>& ds, double z) {
    const auto lc = layer.at(z);
    const double m2 = lc.m * lc.m;
    const double inv_chi = m2 / lc.c;
    const double rho = 1.0 / (lc.c * m2);
    const cplx a = -kI * w / lc.c;
    const cplx da = -kI / lc.c;
    ds[0] = a * s[0] + inv_chi * s[1];
    ds[1] = a * s[1] - rho * w2 * s[0];
    ds[2] = a * s[2] + da * s[0] + inv_chi * s[3];
    ds[3] = a * s[3] + da * s[1] - 2.0 * rho * w * s[0] - rho * w2 * s[2];
  };

  State<4> s{cplx(1.0), kI * w / m1sq, cplx(0.0), kI / m1sq};
  const double p_weight = m1sq / std::max(std::abs(w), omega_min());
  const double h = model_.thickness();
  const double dz0 = std::min(h, 0.5 * h / (1.0 + std::abs(w) * tau_));
  integrate<4>(rhs, s, h, 0.0, layer.breakpoints(), tol_, p_weight, dz0);

  WronskianValue out;
  out.value = s[1] + kI * w / m0sq * s[0];
  out.derivative = s[3] + kI / m0sq * s[0] + kI * w / m0sq * s[2];
  return out;
}

BoundaryTrace WronskianEvaluator::jost_plus_trace(cplx omega) const {
  check_domain(omega);
  const auto& layer = model_.layer();
  const double m1sq = model_.right().m() * model_.right().m();
  const cplx w = omega;
  const cplx w2 = w * w;
  auto rhs = [&](const State<2>& s, State<2>& ds, double z) {
    const auto lc = layer.at(z);
    const double m2 = lc.m * lc.m;
    const cplx a = -kI * w / lc.c;
    ds[0] = a * s[0] + (m2 / lc.c) * s[1];
    ds[1] = a * s[1] - (1.0 / (lc.c * m2)) * w2 * s[0];
  };
  State<2> s{cplx(1.0), kI * w / m1sq};
  const double p_weight = m1sq / std::max(std::abs(w), omega_min());
  const double h = model_.thickness();
  const double dz0 = std::min(h, 0.5 * h / (1.0 + std::abs(w) * tau_));
  integrate<2>(rhs, s, h, 0.0, layer.breakpoints(), tol_, p_weight, dz0);
  return BoundaryTrace{s[0], s[1]};
}

cplx WronskianEvaluator::wronskian(cplx omega) const {
  const auto tr = jost_plus_trace(omega);
  const double m0sq = model_.left().m() * model_.left().m();
  return tr.p + kI * omega / m0sq * tr.u;
}

cplx WronskianEvaluator::wronskian_derivative(cplx omega) const {
  return evaluate(omega).derivative;
}

JostSamples WronskianEvaluator::jost_plus_samples(cplx omega, const std::vector<double>& z) const {
  check_domain(omega);
  const auto& layer = model_.layer();
  const double h = model_.thickness();
  const double m1sq = model_.right().m() * model_.right().m();
  const cplx w2 = omega * omega;
  auto rhs = [&](const State<2>& s, State<2>& ds, double zz) {
    const auto lc = layer.at(zz);
    const double m2 = lc.m * lc.m;
    ds[0] = (m2 / lc.c) * s[1];
    ds[1] = -(1.0 / (lc.c * m2)) * w2 * s[0];
  };

  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return z[a] > z[b]; });

  JostSamples out;
  out.z = z;
  out.u.resize(z.size());
  out.p.resize(z.size());
  State<2> s{cplx(1.0), kI * omega / m1sq};
  double at = h;
  const double p_weight = m1sq / std::max(std::abs(omega), omega_min());
  const double dz0 = std::min(h, 0.5 * h / (1.0 + std::abs(omega) * tau_));
  for (std::size_t idx : order) {
    const double target = std::clamp(z[idx], 0.0, h);
    if (target < at) {
      integrate<2>(rhs, s, at, target, layer.breakpoints(), tol_, p_weight, dz0);
      at = target;
    }
    out.u[idx] = s[0];
    out.p[idx] = s[1];
  }
  return out;
}

namespace {

template <class F>
void for_each_sublayer_reverse(const MediumModel& model, F&& f) {
  const auto& rep = model.layer().representation();
  if (const auto* c = std::get_if<ConstantLayer>(&rep)) {
    f(model.thickness(), c->c, c->m);
  } else if (const auto* s = std::get_if<StackLayer>(&rep)) {
    for (auto it = s->sublayers.rbegin(); it != s->sublayers.rend(); ++it) f(it->thickness, it->c, it->m);
  } else {
    throw DomainError("transfer matrix oracle requires a piecewise-constant layer");
  }
}

WronskianValue transfer_matrix(const MediumModel& model, cplx omega) {
  const double m0sq = model.left().m() * model.left().m();
  const double m1sq = model.right().m() * model.right().m();
  cplx u = 1.0, p = kI * omega / m1sq;
  cplx du = 0.0, dp = kI / m1sq;
  double tau = 0.0;
  for_each_sublayer_reverse(model, [&](double l, double c, double m) {
    const double zimp = 1.0 / (m * m);  // χ/c
    const cplx kl = omega * l / c;
    const cplx cs = std::cos(kl), sn = std::sin(kl);
    const double dkl = l / c;
    // M(-l) and its ω-derivative.
    const cplx a11 = cs, a12 = -sn / (omega * zimp), a21 = omega * zimp * sn, a22 = cs;
    const cplx d11 = -sn * dkl;
    const cplx d12 = -(cs * dkl * omega * zimp - sn * zimp) / (omega * zimp * omega * zimp);
    const cplx d21 = zimp * sn + omega * zimp * cs * dkl;
    const cplx d22 = -sn * dkl;
    const cplx nu = a11 * u + a12 * p;
    const cplx np = a21 * u + a22 * p;
    const cplx ndu = d11 * u + d12 * p + a11 * du + a12 * dp;
    const cplx ndp = d21 * u + d22 * p + a21 * du + a22 * dp;
    u = nu;
    p = np;
    du = ndu;
    dp = ndp;
    tau += l / c;
  });
  const cplx phase = std::exp(kI * omega * tau);
  const cplx core = p + kI * omega / m0sq * u;
  const cplx dcore = dp + kI / m0sq * u + kI * omega / m0sq * du;
  return WronskianValue{phase * core, phase * (kI * tau * core + dcore)};
}

}  // namespace

cplx transfer_matrix_wronskian(const MediumModel& model, cplx omega) {
  return transfer_matrix(model, omega).value;
}

cplx transfer_matrix_wronskian_derivative(const MediumModel& model, cplx omega) {
  return transfer_matrix(model, omega).derivative;
}

void write_wronskian_grid_csv(std::ostream& out, const WronskianEvaluator& ev,
                              double re_lo, double re_hi, int n_re,
                              double im_lo, double im_hi, int n_im, const Executor& exec) {
  if (n_re < 2 || n_im < 2) throw DomainError("grid needs at least 2 nodes per axis");
  const std::size_t total = static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im);
  std::vector<cplx> omega(total), value(total);
  for (int j = 0; j < n_im; ++j) {
    for (int i = 0; i < n_re; ++i) {
      omega[static_cast<std::size_t>(j * n_re + i)] =
          cplx(re_lo + (re_hi - re_lo) * i / (n_re - 1), im_lo + (im_hi - im_lo) * j / (n_im - 1));
    }
  }
  exec(total, [&](std::size_t k) { value[k] = ev.wronskian(omega[k]); });
  out << "re_omega,im_omega,re_W,im_W,abs_W\n";
  for (std::size_t k = 0; k < total; ++k) {
    out << format_double(omega[k].real()) << ',' << format_double(omega[k].imag()) << ','
        << format_double(value[k].real()) << ',' << format_double(value[k].imag()) << ','
        << format_double(std::abs(value[k])) << '\n';
  }
}

}  // namespace stratres
