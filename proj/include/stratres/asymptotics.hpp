#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "stratres/profile.hpp"

namespace stratres {

struct Resonance;

/// Candidate normalizations of the case-ii constant Θ; they differ only in
/// which pair of χ values multiplies m₀ m₁ m₋' m₊'.
enum class ThetaNormalization {
  Chi0ChiMinus,     // m₀ m₁ χ₀ χ₋ m₋' m₊'
  Chi0Chi1,         // m₀ m₁ χ₀ χ₁ m₋' m₊'
  ChiMinusChiPlus,  // m₀ m₁ χ₋ χ₊ m₋' m₊'
};

std::string_view to_string(ThetaNormalization n) noexcept;

struct ThetaCandidates {
  double chi0_chim = 0.0;
  double chi0_chi1 = 0.0;
  double chim_chip = 0.0;

  double get(ThetaNormalization n) const noexcept;
};

inline constexpr ThetaNormalization kDefaultThetaNormalization = ThetaNormalization::ChiMinusChiPlus;

/// Ξ = (m₀²+m₋²)(m₁²+m₊²) / ((m₀²-m₋²)(m₁²-m₊²)). Throws DomainError when a
/// denominator factor is within tol of zero (profile is not case i).
double xi_constant(const EndpointData& data, double tol = kDefaultClassificationTol);

/// All three Θ variants. Throws DomainError if the one selected by `chosen`
/// is not positive.
ThetaCandidates theta_constant(const EndpointData& data,
                               ThetaNormalization chosen = kDefaultThetaNormalization);

/// V(y₋) = -(c₋²/m₋) m₋'', V(y₊) = -(c₊²/m₊) m₊'' using the one-sided layer
/// limits (equal to the half-space c, m under case-iii continuity of c).
/// Throws DomainError unless V(y₋) V(y₊) > 0.
std::pair<double, double> endpoint_potentials(const EndpointData& data);

struct AsymptoticModel {
  SmoothnessTag tag = SmoothnessTag::Unclassified;
  double tau = 0.0;
  double xi = 0.0;     // case i
  double theta = 0.0;  // case ii, under `normalization`
  ThetaNormalization normalization = kDefaultThetaNormalization;
  ThetaCandidates theta_candidates;  // case ii
  double v_minus = 0.0, v_plus = 0.0;  // case iii

  /// Lattice offset: 1/2 for case i with Ξ < -1, else 0.
  double lattice_offset() const noexcept;
};

/// Builds the model for the given case, validating the case invariants.
AsymptoticModel make_asymptotic_model(const EndpointData& data, double tau, SmoothnessTag tag,
                                      ThetaNormalization normalization = kDefaultThetaNormalization,
                                      double tol = kDefaultClassificationTol);

/// Leading-order resonance ω̂ₙ. Case i, Ξ > 1:  πn/τ - i lnΞ/(2τ);
/// Ξ < -1: π(n + 1/2)/τ - i ln(-Ξ)/(2τ); case ii:
/// πn/τ - i(ln|2πn| - ln(τ√Θ))/τ; case iii:
/// πn/τ - i(2 ln|2πn| - ln(τ²√(V₋V₊)))/τ.
/// n = 0 is a DomainError except on the shifted Ξ < -1 lattice.
std::complex<double> asymptotic_resonance(const AsymptoticModel& am, int n);

/// Predicted drift slope of Im ωₙ against ln|2πn|: 0, -1/τ or -2/τ.
double expected_drift_slope(const AsymptoticModel& am);
/// Predicted intercept of Im ωₙ against ln|2πn| (case ii uses am.theta).
double expected_intercept(const AsymptoticModel& am);

struct ComparisonRow {
  int n = 0;
  std::complex<double> numeric;
  std::complex<double> predicted;
  double gap = 0.0;         // |numeric - predicted|
  double scaled_gap = 0.0;  // gap·|n|
};

struct CompareOptions {
  int n_fit_min = 10;
  std::optional<int> n_fit_max;
  double slope_rel_tol = 0.05;      // cases ii, iii
  double intercept_rel_tol = 0.10;  // cases ii, iii
  double case_i_slope_abs_tol = 0.05;  // in units of 1/τ
  double case_i_intercept_rel_tol = 0.10;
};

struct ThetaSelection {
  ThetaNormalization best = kDefaultThetaNormalization;
  double candidate_intercepts[3] = {0.0, 0.0, 0.0};  // Chi0ChiMinus, Chi0Chi1, ChiMinusChiPlus
  double error = 0.0;  // |pinned intercept - best|
  double gap = 0.0;    // distance from best to the nearest other candidate
  bool unique = false; // error < 0.2 gap
};

struct ComparisonReport {
  SmoothnessTag tag = SmoothnessTag::Unclassified;
  double tau = 0.0;
  std::vector<ComparisonRow> rows;  // sorted by n
  int fit_points = 0;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  /// Intercept with the slope pinned to its predicted value (mean residual).
  double pinned_intercept = 0.0;
  double expected_slope = 0.0;
  double expected_intercept = 0.0;
  bool slope_ok = false;
  bool intercept_ok = false;
  std::optional<ThetaSelection> theta;  // case ii only
};

/// Least-squares fit of Im ωₙ against ln|2πn| over |n| >= n_fit_min, plus
/// per-index gaps to the leading-order prediction. The slope check uses the
/// free fit; the intercept check and Θ selection use the pinned-slope
/// intercept, which is insensitive to the O(1/n) slope bias.
ComparisonReport compare(const std::vector<Resonance>& resonances, const AsymptoticModel& am,
                         const CompareOptions& opt = {});

void write_comparison_json(std::ostream& out, const ComparisonReport& report);
/// Two columns: n, |numeric - predicted|.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace stratres
