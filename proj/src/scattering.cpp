#include "stratres/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "stratres/errors.hpp"
#include "stratres/format.hpp"

namespace stratres {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

ReflectionSample reflection_coefficient(const WronskianEvaluator& ev, double omega) {
  if (std::abs(omega) < ev.omega_min()) {
    throw DomainError("|omega| below the threshold exclusion omega_min");
  }
  const auto& model = ev.model();
  const double m0sq = model.left().m() * model.left().m();
  const double m1sq = model.right().m() * model.right().m();
  const auto tr = ev.jost_plus_trace(omega);
  const cplx a = kI * omega / m0sq;
  const cplx w = tr.p + a * tr.u;
  const cplx phase = std::exp(-kI * omega * ev.tau());

  ReflectionSample s;
  s.omega = omega;
  s.t = 2.0 * a / (phase * w);
  s.r = 2.0 * a * tr.u / w - 1.0;
  const double in = 1.0 / m0sq;
  s.flux_residual = std::abs((1.0 - std::norm(s.r)) / m0sq - std::norm(s.t) / m1sq) / in;
  return s;
}

std::vector<ReflectionSample> reflection_scan(const WronskianEvaluator& ev, double omega_lo,
                                              double omega_hi, int steps, const Executor& exec) {
  if (steps < 2 || !(omega_lo < omega_hi)) throw DomainError("empty frequency scan");
  std::vector<ReflectionSample> out(static_cast<std::size_t>(steps));
  exec(out.size(), [&](std::size_t i) {
    const double w = omega_lo + (omega_hi - omega_lo) * static_cast<double>(i) / (steps - 1);
    out[i] = reflection_coefficient(ev, w);
  });
  return out;
}

double phase_derivative(const WronskianEvaluator& ev, double omega, double d_omega) {
  if (d_omega <= 0.0) d_omega = kPi / (200.0 * ev.tau());
  auto reduced = [&](double w) {
    return reflection_coefficient(ev, w).t * std::exp(-kI * w * ev.tau());
  };
  const cplx lo = reduced(omega - d_omega), mid = reduced(omega), hi = reduced(omega + d_omega);
  const double left = std::arg(mid / lo), right = std::arg(hi / mid);
  if (std::abs(left) >= 0.5 * kPi || std::abs(right) >= 0.5 * kPi) {
    throw DomainError("phase unwrap ambiguous at omega = " + format_double(omega) +
                      ": decrease d_omega");
  }
  return (left + right) / (2.0 * d_omega * kPi);
}

double breit_wigner(cplx omega_n, double omega) {
  if (!(omega_n.imag() < 0.0)) throw DomainError("Breit-Wigner needs Im omega_n < 0");
  return -omega_n.imag() / (kPi * std::norm(omega - omega_n));
}

std::vector<Peak> detect_peaks(const std::vector<double>& omega, const std::vector<double>& values,
                               const PeakOptions& opt) {
  const std::size_t n = omega.size();
  if (values.size() != n) throw DomainError("peak detection: omega and values differ in length");
  if (!std::is_sorted(omega.begin(), omega.end())) {
    throw DomainError("peak detection: samples must be sorted by omega");
  }
  std::vector<Peak> peaks;
  if (n >= 3) {
    const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
    const double threshold = opt.prominence_fraction * (*vmax - *vmin);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (!(values[i] > values[i - 1] && values[i] > values[i + 1])) continue;
      const double h = values[i];
      // Lowest point on each side before the signal rises above the peak.
      std::size_t l = i, r = i;
      double base_l = h, base_r = h;
      while (l > 0 && values[l - 1] <= h) base_l = std::min(base_l, values[--l]);
      while (r + 1 < n && values[r + 1] <= h) base_r = std::min(base_r, values[++r]);
      const double prom = h - std::max(base_l, base_r);
      if (!(prom >= threshold) || prom <= 0.0) continue;

      const double level = h - 0.5 * prom;
      auto crossing = [&](std::size_t j, std::size_t k) {
        // Linear interpolation between samples j (above level) and k (below).
        const double f = (values[j] - level) / (values[j] - values[k]);
        return omega[j] + f * (omega[k] - omega[j]);
      };
      std::size_t j = i;
      while (j > 0 && values[j - 1] > level) --j;
      const double w_lo = j > 0 ? crossing(j, j - 1) : omega.front();
      std::size_t k = i;
      while (k + 1 < n && values[k + 1] > level) ++k;
      const double w_hi = k + 1 < n ? crossing(k, k + 1) : omega.back();
      peaks.push_back(Peak{omega[i], h, w_hi - w_lo, prom});
    }
  }
  if (peaks.size() < 2) {
    throw DomainError("found " + std::to_string(peaks.size()) + " peak(s): cannot estimate spacing");
  }
  return peaks;
}

TauEstimate estimate_tau(const std::vector<Peak>& peaks) {
  if (peaks.size() < 2) throw DomainError("cannot estimate spacing from fewer than 2 peaks");
  TauEstimate est;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    est.per_gap.push_back(kPi / (peaks[i].omega_peak - peaks[i - 1].omega_peak));
  }
  const double mean_gap = (peaks.back().omega_peak - peaks.front().omega_peak) /
                          static_cast<double>(peaks.size() - 1);
  est.tau_hat = kPi / mean_gap;
  const auto [lo, hi] = std::minmax_element(est.per_gap.begin(), est.per_gap.end());
  est.spread = *hi - *lo;
  return est;
}

void write_spectrum_csv(std::ostream& out, const std::vector<ReflectionSample>& samples) {
  out << "omega,abs_r,arg_r,abs_t,flux_residual\n";
  for (const auto& s : samples) {
    out << format_double(s.omega) << ',' << format_double(std::abs(s.r)) << ','
        << format_double(std::arg(s.r)) << ',' << format_double(std::abs(s.t)) << ','
        << format_double(s.flux_residual) << '\n';
  }
}

void write_peaks_json(std::ostream& out, const std::vector<Peak>& peaks, const TauEstimate& est,
                      double tau_quadrature, const std::string& metadata_json) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::parse(metadata_json);
  j["tau_quadrature"] = tau_quadrature;
  j["tau_hat"] = est.tau_hat;
  j["tau_relative_error"] = std::abs(est.tau_hat - tau_quadrature) / tau_quadrature;
  j["tau_per_gap"] = est.per_gap;
  j["tau_spread"] = est.spread;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : peaks) {
    arr.push_back({{"omega_peak", p.omega_peak},
                   {"height", p.height},
                   {"width_estimate", p.width_estimate},
                   {"prominence", p.prominence}});
  }
  j["peaks"] = arr;
  out << j.dump(2) << '\n';
}

}  // namespace stratres
