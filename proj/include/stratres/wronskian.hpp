#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "stratres/liouville.hpp"
#include "stratres/parallel.hpp"
#include "stratres/profile.hpp"

namespace stratres {

using cplx = std::complex<double>;

struct IntegratorTolerances {
  double rel = 1e-10;
  double abs = 1e-12;
};

/// f⁺ and its traction χ df⁺/dz at z = 0, in the scaled normalization
/// described on WronskianEvaluator.
struct BoundaryTrace {
  cplx u;
  cplx p;
};

struct WronskianValue {
  cplx value;
  cplx derivative;
};

/// Evaluates the scaled Wronskian Ŵ(ω) = e^{iω(τ - h/c₁)} {f⁻, f⁺}(ω).
///
/// f⁺ is integrated from z = h to z = 0 in the variables (U, P = χU'),
/// which are continuous across both interfaces, after factoring out
/// e^{iω(y(z) - τ)}: the state S = e^{-iω(y(z)-τ)} (U, P) e^{-iωh/c₁}
/// starts at S(h) = (1, iω/m₁²) and satisfies
///     S_U' = -(iω/c) S_U + S_P/χ,   S_P' = -(iω/c) S_P - ρω² S_U.
/// Then Ŵ = S_P(0) + (iω/m₀²) S_U(0). The exponential factor is zero-free,
/// so Ŵ and {f⁻, f⁺} share their zeros. dŴ/dω comes from integrating the
/// ω-variational system alongside.
///
/// Pure and immutable; safe to call concurrently.
class WronskianEvaluator {
public:
  /// depth_factor: largest admissible |Im ω| τ.
  explicit WronskianEvaluator(MediumModel model, IntegratorTolerances tol = {},
                              double depth_factor = 40.0);

  const MediumModel& model() const noexcept { return model_; }
  const IntegratorTolerances& tolerances() const noexcept { return tol_; }
  double tau() const noexcept { return tau_; }
  /// Smallest admissible |ω|: 1e-6 / τ.
  double omega_min() const noexcept { return 1e-6 / tau_; }
  /// Largest admissible -Im ω.
  double max_depth() const noexcept { return depth_factor_ / tau_; }

  BoundaryTrace jost_plus_trace(cplx omega) const;
  cplx wronskian(cplx omega) const;
  cplx wronskian_derivative(cplx omega) const;
  WronskianValue evaluate(cplx omega) const;

  /// Unscaled f⁺ normalized by f⁺(h) = 1: U(z), P(z) at the requested
  /// points (any order, inside [0, h]). Results are returned in input order.
  JostSamples jost_plus_samples(cplx omega, const std::vector<double>& z) const;

  /// Same evaluator with different integrator tolerances.
  WronskianEvaluator with_tolerances(IntegratorTolerances tol) const;

private:
  void check_domain(cplx omega) const;

  MediumModel model_;
  IntegratorTolerances tol_;
  double depth_factor_;
  double tau_;
};

/// Exact Ŵ for constant or stacked layers via 2×2 propagation of (U, P):
///   [U; P](z) = [[cos kl, -sin kl/(kχ)], [kχ sin kl, cos kl]] [U; P](z + l),
/// k = ω/c, with the same scaling as WronskianEvaluator.
/// Throws DomainError for any other layer representation.
cplx transfer_matrix_wronskian(const MediumModel& model, cplx omega);

/// Derivative of transfer_matrix_wronskian with respect to ω.
cplx transfer_matrix_wronskian_derivative(const MediumModel& model, cplx omega);

/// CSV "re_omega,im_omega,re_W,im_W,abs_W" over a rectangular grid
/// (n_re × n_im nodes, endpoints included). Rows ordered by im, then re.
void write_wronskian_grid_csv(std::ostream& out, const WronskianEvaluator& ev,
                              double re_lo, double re_hi, int n_re,
                              double im_lo, double im_hi, int n_im,
                              const Executor& exec = run_serial);

}  // namespace stratres
