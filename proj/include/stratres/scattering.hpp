#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "stratres/parallel.hpp"
#include "stratres/wronskian.hpp"

namespace stratres {

/// Integrator tolerances for real-frequency work. The defaults leave flux
/// residuals near 1e-9 on contrast layers; these keep them below 1e-11.
inline constexpr IntegratorTolerances kScatteringTolerances{1e-12, 1e-14};

/// Real-frequency scattering data for a wave incident from the left:
///   U = e^{iωz/c₀} + r e^{-iωz/c₀}  (z < 0),   U = t e^{iω(z-h)/c₁}  (z > h).
struct ReflectionSample {
  double omega = 0.0;
  cplx r;
  cplx t;
  /// |(1 - |r|²)/m₀² - |t|²/m₁²| relative to the incident flux 1/m₀².
  double flux_residual = 0.0;
};

/// Solves the matching problem from the f⁺ trace at z = 0:
/// t = 2a/(e^{-iωτ} Ŵ), r = 2a S_U/Ŵ - 1 with a = iω/m₀².
/// Throws DomainError for |ω| < omega_min.
ReflectionSample reflection_coefficient(const WronskianEvaluator& ev, double omega);

/// `steps` samples on [omega_lo, omega_hi], endpoints included.
std::vector<ReflectionSample> reflection_scan(const WronskianEvaluator& ev, double omega_lo,
                                              double omega_hi, int steps,
                                              const Executor& exec = run_serial);

/// (1/π) d/dω arg(t e^{-iωτ}) by a centred difference of half-width dω.
/// Removing the free travel phase makes this vanish for a contrast-free
/// medium. dω <= 0 selects the default π/(200τ). Throws DomainError
/// ("decrease dω") when the phase moves by π/2 or more across a half-step.
double phase_derivative(const WronskianEvaluator& ev, double omega, double d_omega = 0.0);

/// -(1/π) Im ωₙ / |ω - ωₙ|². Throws DomainError unless Im ωₙ < 0.
double breit_wigner(cplx omega_n, double omega);

struct Peak {
  double omega_peak = 0.0;
  double height = 0.0;
  /// Full width at half prominence.
  double width_estimate = 0.0;
  double prominence = 0.0;
};

struct PeakOptions {
  /// Minimum prominence as a fraction of the observable's range.
  double prominence_fraction = 0.05;
};

/// Strict interior local maxima of values(omega) whose prominence clears
/// the threshold. Throws DomainError on unsorted or mismatched input and
/// when fewer than 2 peaks remain ("cannot estimate spacing").
std::vector<Peak> detect_peaks(const std::vector<double>& omega, const std::vector<double>& values,
                               const PeakOptions& opt = {});

struct TauEstimate {
  double tau_hat = 0.0;
  std::vector<double> per_gap;  // π / (successive spacing)
  double spread = 0.0;          // max - min of per_gap
};

/// τ̂ = π / mean successive spacing. Throws DomainError for fewer than 2 peaks.
TauEstimate estimate_tau(const std::vector<Peak>& peaks);

/// "omega,abs_r,arg_r,abs_t,flux_residual" rows.
void write_spectrum_csv(std::ostream& out, const std::vector<ReflectionSample>& samples);

void write_peaks_json(std::ostream& out, const std::vector<Peak>& peaks, const TauEstimate& est,
                      double tau_quadrature, const std::string& metadata_json = "{}");

}  // namespace stratres
