#include "stratres/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "stratres/errors.hpp"
#include "stratres/format.hpp"
#include "stratres/resonances.hpp"

namespace stratres {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view to_string(ThetaNormalization n) noexcept {
  switch (n) {
    case ThetaNormalization::Chi0ChiMinus: return "chi0_chim";
    case ThetaNormalization::Chi0Chi1: return "chi0_chi1";
    case ThetaNormalization::ChiMinusChiPlus: return "chim_chip";
  }
  return "chim_chip";
}

double ThetaCandidates::get(ThetaNormalization n) const noexcept {
  switch (n) {
    case ThetaNormalization::Chi0ChiMinus: return chi0_chim;
    case ThetaNormalization::Chi0Chi1: return chi0_chi1;
    case ThetaNormalization::ChiMinusChiPlus: return chim_chip;
  }
  return chim_chip;
}

double xi_constant(const EndpointData& d, double tol) {
  const double m0s = d.m0 * d.m0, m1s = d.m1 * d.m1;
  const double mms = d.m_minus * d.m_minus, mps = d.m_plus * d.m_plus;
  const double den_left = m0s - mms, den_right = m1s - mps;
  if (std::abs(den_left) <= tol || std::abs(den_right) <= tol) {
    throw DomainError("not case i: m-values are continuous at an interface");
  }
  const double xi = (m0s + mms) * (m1s + mps) / (den_left * den_right);
  if (!(std::abs(xi) > 1.0)) throw DomainError("|Xi| <= 1 contradicts positivity of m");
  return xi;
}

ThetaCandidates theta_constant(const EndpointData& d, ThetaNormalization chosen) {
  const double common = d.m0 * d.m1 * d.dm_minus * d.dm_plus;
  ThetaCandidates t;
  t.chi0_chim = common * d.chi0 * d.chi_minus;
  t.chi0_chi1 = common * d.chi0 * d.chi1;
  t.chim_chip = common * d.chi_minus * d.chi_plus;
  if (!(t.get(chosen) > 0.0)) {
    throw DomainError("Theta <= 0 under the " + std::string(to_string(chosen)) +
                      " normalization: m'(0+) m'(h-) must be positive for the case-ii law");
  }
  return t;
}

std::pair<double, double> endpoint_potentials(const EndpointData& d) {
  const double vm = -(d.c_minus * d.c_minus / d.m_minus) * d.d2m_minus;
  const double vp = -(d.c_plus * d.c_plus / d.m_plus) * d.d2m_plus;
  if (!(vm * vp > 0.0)) {
    throw DomainError("case iii hypothesis violated: V(y-) V(y+) must be positive");
  }
  return {vm, vp};
}

double AsymptoticModel::lattice_offset() const noexcept {
  return tag == SmoothnessTag::CaseI && xi < 0.0 ? 0.5 : 0.0;
}

AsymptoticModel make_asymptotic_model(const EndpointData& data, double tau, SmoothnessTag tag,
                                      ThetaNormalization normalization, double tol) {
  if (!(tau > 0.0)) throw DomainError("travel time must be positive");
  AsymptoticModel am;
  am.tag = tag;
  am.tau = tau;
  am.normalization = normalization;
  switch (tag) {
    case SmoothnessTag::CaseI:
      am.xi = xi_constant(data, tol);
      break;
    case SmoothnessTag::CaseII:
      am.theta_candidates = theta_constant(data, normalization);
      am.theta = am.theta_candidates.get(normalization);
      break;
    case SmoothnessTag::CaseIII:
      std::tie(am.v_minus, am.v_plus) = endpoint_potentials(data);
      break;
    case SmoothnessTag::Unclassified:
      throw DomainError("no asymptotic law for an unclassified profile");
  }
  return am;
}

std::complex<double> asymptotic_resonance(const AsymptoticModel& am, int n) {
  const double tau = am.tau;
  const double offset = am.lattice_offset();
  if (n == 0 && offset == 0.0) throw DomainError("n = 0 is excluded (threshold)");
  const double re = kPi * (n + offset) / tau;
  const double l2pn = std::log(std::abs(2.0 * kPi * n));
  switch (am.tag) {
    case SmoothnessTag::CaseI:
      return {re, -std::log(std::abs(am.xi)) / (2.0 * tau)};
    case SmoothnessTag::CaseII:
      return {re, -(l2pn - std::log(tau * std::sqrt(am.theta))) / tau};
    case SmoothnessTag::CaseIII:
      return {re, -(2.0 * l2pn - std::log(tau * tau * std::sqrt(am.v_minus * am.v_plus))) / tau};
    case SmoothnessTag::Unclassified:
      break;
  }
  throw DomainError("no asymptotic law for an unclassified profile");
}

double expected_drift_slope(const AsymptoticModel& am) {
  switch (am.tag) {
    case SmoothnessTag::CaseI: return 0.0;
    case SmoothnessTag::CaseII: return -1.0 / am.tau;
    case SmoothnessTag::CaseIII: return -2.0 / am.tau;
    case SmoothnessTag::Unclassified: break;
  }
  throw DomainError("no asymptotic law for an unclassified profile");
}

double expected_intercept(const AsymptoticModel& am) {
  switch (am.tag) {
    case SmoothnessTag::CaseI: return -std::log(std::abs(am.xi)) / (2.0 * am.tau);
    case SmoothnessTag::CaseII: return std::log(am.tau * std::sqrt(am.theta)) / am.tau;
    case SmoothnessTag::CaseIII:
      return std::log(am.tau * am.tau * std::sqrt(am.v_minus * am.v_plus)) / am.tau;
    case SmoothnessTag::Unclassified: break;
  }
  throw DomainError("no asymptotic law for an unclassified profile");
}

ComparisonReport compare(const std::vector<Resonance>& resonances, const AsymptoticModel& am,
                         const CompareOptions& opt) {
  ComparisonReport rep;
  rep.tag = am.tag;
  rep.tau = am.tau;
  rep.expected_slope = expected_drift_slope(am);
  rep.expected_intercept = expected_intercept(am);

  for (const auto& r : resonances) {
    ComparisonRow row;
    row.n = r.n;
    row.numeric = r.omega;
    row.predicted = asymptotic_resonance(am, r.n);
    row.gap = std::abs(row.numeric - row.predicted);
    row.scaled_gap = row.gap * std::abs(r.n);
    rep.rows.push_back(row);
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const auto& a, const auto& b) { return a.n < b.n; });

  // Least squares Im ω = slope·x + intercept, x = ln|2πn|.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, spin = 0.0;
  int k = 0;
  for (const auto& row : rep.rows) {
    const int an = std::abs(row.n);
    if (an < opt.n_fit_min || (opt.n_fit_max && an > *opt.n_fit_max)) continue;
    const double x = std::log(2.0 * kPi * an);
    const double y = row.numeric.imag();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    spin += y - rep.expected_slope * x;
    ++k;
  }
  if (k < 10) throw DomainError("compare needs at least 10 resonances with |n| >= n_fit_min");
  rep.fit_points = k;
  const double denom = k * sxx - sx * sx;
  rep.fitted_slope = (k * sxy - sx * sy) / denom;
  rep.fitted_intercept = (sy - rep.fitted_slope * sx) / k;
  rep.pinned_intercept = spin / k;

  const double tau = am.tau;
  if (am.tag == SmoothnessTag::CaseI) {
    rep.slope_ok = std::abs(rep.fitted_slope) * tau <= opt.case_i_slope_abs_tol;
    rep.intercept_ok = std::abs(rep.pinned_intercept - rep.expected_intercept) <=
                       opt.case_i_intercept_rel_tol * std::abs(rep.expected_intercept);
  } else {
    rep.slope_ok = std::abs(rep.fitted_slope - rep.expected_slope) <=
                   opt.slope_rel_tol * std::abs(rep.expected_slope);
    rep.intercept_ok = std::abs(rep.pinned_intercept - rep.expected_intercept) <=
                       opt.intercept_rel_tol * std::abs(rep.expected_intercept);
  }

  if (am.tag == SmoothnessTag::CaseII) {
    ThetaSelection sel;
    const ThetaNormalization all[3] = {ThetaNormalization::Chi0ChiMinus, ThetaNormalization::Chi0Chi1,
                                       ThetaNormalization::ChiMinusChiPlus};
    double best_err = INFINITY;
    int best = 2;
    for (int i = 0; i < 3; ++i) {
      const double th = am.theta_candidates.get(all[i]);
      sel.candidate_intercepts[i] = th > 0.0 ? std::log(tau * std::sqrt(th)) / tau : NAN;
      const double err = std::abs(rep.pinned_intercept - sel.candidate_intercepts[i]);
      if (err < best_err) {
        best_err = err;
        best = i;
      }
    }
    sel.best = all[best];
    sel.error = best_err;
    sel.gap = INFINITY;
    for (int i = 0; i < 3; ++i) {
      if (i == best || !std::isfinite(sel.candidate_intercepts[i])) continue;
      sel.gap = std::min(sel.gap, std::abs(sel.candidate_intercepts[i] - sel.candidate_intercepts[best]));
    }
    sel.unique = sel.error < 0.2 * sel.gap;
    rep.theta = sel;
  }
  return rep;
}

void write_comparison_json(std::ostream& out, const ComparisonReport& rep) {
  nlohmann::ordered_json j;
  j["case"] = std::string(to_string(rep.tag));
  j["tau"] = rep.tau;
  j["fit_points"] = rep.fit_points;
  j["fitted_slope"] = rep.fitted_slope;
  j["fitted_intercept"] = rep.fitted_intercept;
  j["pinned_intercept"] = rep.pinned_intercept;
  j["expected_slope"] = rep.expected_slope;
  j["expected_intercept"] = rep.expected_intercept;
  j["slope_ok"] = rep.slope_ok;
  j["intercept_ok"] = rep.intercept_ok;
  if (rep.theta) {
    auto& t = j["theta_selection"];
    t["best"] = std::string(to_string(rep.theta->best));
    t["intercept_chi0_chim"] = rep.theta->candidate_intercepts[0];
    t["intercept_chi0_chi1"] = rep.theta->candidate_intercepts[1];
    t["intercept_chim_chip"] = rep.theta->candidate_intercepts[2];
    t["error"] = rep.theta->error;
    t["gap"] = rep.theta->gap;
    t["unique"] = rep.theta->unique;
  }
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"n", r.n},
                    {"re_numeric", r.numeric.real()},
                    {"im_numeric", r.numeric.imag()},
                    {"re_predicted", r.predicted.real()},
                    {"im_predicted", r.predicted.imag()},
                    {"gap", r.gap},
                    {"scaled_gap", r.scaled_gap}});
  }
  j["rows"] = rows;
  out << j.dump(2) << '\n';
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& rep) {
  out << "n,error\n";
  for (const auto& r : rep.rows) out << r.n << ',' << format_double(r.gap) << '\n';
}

}  // namespace stratres
