#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stratres/asymptotics.hpp"
#include "stratres/parallel.hpp"
#include "stratres/wronskian.hpp"

namespace stratres {

/// Indexed zero of Ŵ in the lower half-plane.
struct Resonance {
  int n = 0;
  cplx omega;
  /// |Ŵ/Ŵ'| at the returned point: Newton's estimate of the distance to the zero.
  double newton_residual = 0.0;
  cplx seed;
  int multiplicity = 1;
  int iterations = 0;
  /// Newton step lengths, first to last.
  std::vector<double> steps;
  /// Zeros counted in the audit box for this index; -1 when not audited.
  int box_count = -1;

  bool audit_ok() const noexcept { return box_count == 1; }
};

/// Rectangle [re_lo, re_hi] × [im_lo, im_hi] in the ω-plane, im_hi <= 0.
struct SearchBox {
  double re_lo, re_hi, im_lo, im_hi;

  void validate() const;
  bool contains(cplx w) const noexcept {
    return w.real() >= re_lo && w.real() <= re_hi && w.imag() >= im_lo && w.imag() <= im_hi;
  }
};

struct ContourOptions {
  /// Contour is rejected when min |Ŵ| < clearance · median |Ŵ| on it.
  double clearance = 1e-6;
  int max_perturbations = 3;
  /// Longest edge segment, in units of 1/τ, before adaptive refinement.
  double max_segment = 0.5;
};

struct ZeroCount {
  int count = 0;
  double raw = 0.0;        // winding number before rounding
  SearchBox box{};         // contour actually used (after any perturbation)
  int evaluations = 0;
};

/// Argument principle (1/2πi)∮ Ŵ'/Ŵ dω over the positively oriented boundary.
/// Each edge is split adaptively until a 5-point Gauss–Legendre value of
/// ∫Ŵ'/Ŵ agrees with the principal log of the endpoint ratio. Throws
/// ContourError if the contour stays too close to a zero after the allowed
/// perturbations, or if the integral is not within 0.25 of an integer.
ZeroCount count_zeros(const WronskianEvaluator& ev, const SearchBox& box,
                      const ContourOptions& opt = {});

struct RefineOptions {
  /// Convergence when |Newton step| <= tol · max(|ω|, 1/τ).
  double tol = 1e-10;
  int max_iterations = 12;
  /// Count zeros in a small box around the result (costs a contour).
  bool check_multiplicity = false;
};

/// Newton's method on Ŵ. Throws ConvergenceError (carrying the best iterate)
/// on divergence, on approach to the excluded threshold ω = 0, or when the
/// limit has Im ω >= 0.
Resonance refine(const WronskianEvaluator& ev, cplx seed, const RefineOptions& opt = {});

struct EnumerateOptions {
  std::optional<SmoothnessTag> force_case;
  double classification_tol = kDefaultClassificationTol;
  ThetaNormalization theta_normalization = kDefaultThetaNormalization;
  RefineOptions refine;
  ContourOptions contour;
  bool audit = true;
  /// Top edge of audit boxes, in units of 1/τ (negative).
  double box_top = -0.01;
  /// Audit depth for profiles without an asymptotic law, in units of 1/τ.
  double unclassified_depth = 10.0;
  /// Fallback seed grid (per index box) when asymptotic seeding fails.
  int fallback_grid_re = 12;
  int fallback_grid_im = 16;
  Executor executor = run_serial;
};

struct IndexFailure {
  int n = 0;
  std::string message;
};

struct EnumerationResult {
  SmoothnessCase classification;
  std::optional<AsymptoticModel> asymptotics;
  std::vector<Resonance> resonances;   // sorted by n
  std::vector<IndexFailure> failures;  // per-index errors, sorted by n
  std::vector<std::string> notices;
  double lattice_offset = 0.0;
  double audit_depth = 0.0;            // common depth of the audit boxes
  /// Union-box counts (one per contiguous block of indices on each side of 0).
  int union_count = 0;
  int box_count_sum = 0;               // over all audited index boxes
  bool complete = false;       // union_count == box_count_sum == #resonances
  bool symmetric = true;       // ω₋ₙ = -conj(ωₙ) for every computed pair
};

/// Index box for n: width π/τ centred on the lattice point, from -depth to box_top.
SearchBox index_box(double tau, double lattice_offset, int n, double depth, double box_top);

/// Audit depth (in 1/s) for index n under the given asymptotic model.
double audit_depth(const AsymptoticModel& am, int n);

/// One resonance per index in [n_lo, n_hi]. n = 0 is skipped (with a notice)
/// except on the shifted Ξ < -1 lattice.
EnumerationResult enumerate_resonances(const WronskianEvaluator& ev, int n_lo, int n_hi,
                                       const EnumerateOptions& opt = {});

/// "n,re_omega,im_omega,re_seed,im_seed,residual,audit" rows.
void write_resonances_csv(std::ostream& out, const EnumerationResult& result);
void write_resonances_json(std::ostream& out, const EnumerationResult& result,
                           const std::string& metadata_json = "{}");

}  // namespace stratres
