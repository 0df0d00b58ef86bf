#include "stratres/resonances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include <json.hpp>

#include "stratres/errors.hpp"
#include "stratres/format.hpp"

namespace stratres {

namespace {

constexpr double kPi = std::numbers::pi;

// 5-point Gauss–Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                         0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights{0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

struct ContourTally {
  double winding = 0.0;  // Σ Im log(Ŵ(b)/Ŵ(a))
  double raw = 0.0;      // Σ Im ∫ Ŵ'/Ŵ (quadrature)
  double min_abs = INFINITY;
  std::vector<double> abs_values;
  int evaluations = 0;
};

WronskianValue eval_counted(const WronskianEvaluator& ev, cplx w, ContourTally& t) {
  const auto v = ev.evaluate(w);
  ++t.evaluations;
  const double a = std::abs(v.value);
  t.min_abs = std::min(t.min_abs, a);
  t.abs_values.push_back(a);
  return v;
}

void integrate_segment(const WronskianEvaluator& ev, cplx a, cplx b, const WronskianValue& fa,
                       const WronskianValue& fb, ContourTally& t, int depth) {
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx quad = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    const auto v = eval_counted(ev, mid + kGlNodes[i] * half, t);
    quad += kGlWeights[i] * v.derivative / v.value;
  }
  quad *= half;
  const cplx lg = std::log(fb.value / fa.value);
  const bool agree = std::abs(quad - lg) < 0.05 && std::abs(lg.imag()) < 0.5 * kPi;
  if (agree || depth >= 40) {
    if (!agree) throw ContourError("argument-principle segment failed to resolve");
    t.winding += lg.imag();
    t.raw += quad.imag();
    return;
  }
  const auto fm = eval_counted(ev, mid, t);
  integrate_segment(ev, a, mid, fa, fm, t, depth + 1);
  integrate_segment(ev, mid, b, fm, fb, t, depth + 1);
}

ContourTally integrate_contour(const WronskianEvaluator& ev, const SearchBox& box,
                               const ContourOptions& opt) {
  ContourTally t;
  const std::array<cplx, 5> corners{cplx(box.re_lo, box.im_lo), cplx(box.re_hi, box.im_lo),
                                    cplx(box.re_hi, box.im_hi), cplx(box.re_lo, box.im_hi),
                                    cplx(box.re_lo, box.im_lo)};
  const double seg = opt.max_segment / ev.tau();
  auto f_prev = eval_counted(ev, corners[0], t);
  for (std::size_t e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[e + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / seg)));
    cplx prev = a;
    for (int k = 1; k <= pieces; ++k) {
      const cplx next = k == pieces ? b : a + (b - a) * (static_cast<double>(k) / pieces);
      const auto f_next = eval_counted(ev, next, t);
      integrate_segment(ev, prev, next, f_prev, f_next, t, 0);
      prev = next;
      f_prev = f_next;
    }
  }
  return t;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

void SearchBox::validate() const {
  if (!(re_lo < re_hi) || !(im_lo < im_hi)) throw DomainError("search box has empty interior");
  if (im_hi > 0.0) throw DomainError("search box must lie in the closed lower half-plane");
}

ZeroCount count_zeros(const WronskianEvaluator& ev, const SearchBox& box, const ContourOptions& opt) {
  box.validate();
  SearchBox current = box;
  int total_evals = 0;
  for (int attempt = 0; attempt <= opt.max_perturbations; ++attempt) {
    if (attempt > 0) {
      // Push the three free edges outward; the top edge stays put.
      const double d = 0.01 * attempt * (box.re_hi - box.re_lo);
      current = SearchBox{box.re_lo - d, box.re_hi + d, box.im_lo - d, box.im_hi};
    }
    ContourTally t;
    try {
      t = integrate_contour(ev, current, opt);
    } catch (const ContourError&) {
      total_evals += t.evaluations;
      continue;
    }
    total_evals += t.evaluations;
    if (t.min_abs < opt.clearance * median(t.abs_values)) continue;

    const double raw = t.raw / (2.0 * kPi);
    const double wind = t.winding / (2.0 * kPi);
    const int count = static_cast<int>(std::lround(raw));
    if (std::abs(raw - count) > 0.25 || std::lround(wind) != count) {
      throw ContourError("non-integer winding " + format_double(raw) + " on box [" +
                         format_double(current.re_lo) + ", " + format_double(current.re_hi) +
                         "] x [" + format_double(current.im_lo) + ", " +
                         format_double(current.im_hi) + "]");
    }
    return ZeroCount{count, raw, current, total_evals};
  }
  throw ContourError("contour passes too close to a zero after " +
                     std::to_string(opt.max_perturbations) + " perturbations");
}

Resonance refine(const WronskianEvaluator& ev, cplx seed, const RefineOptions& opt) {
  Resonance r;
  r.seed = seed;
  cplx w = seed;
  cplx best = seed;
  double best_step = INFINITY;
  const double tau = ev.tau();
  const double max_jump = 0.5 * kPi / tau;
  bool converged = false;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    WronskianValue v;
    try {
      v = ev.evaluate(w);
    } catch (const DomainError& e) {
      throw ConvergenceError(std::string("Newton left the admissible region: ") + e.what(), best);
    }
    if (v.derivative == 0.0) throw ConvergenceError("vanishing derivative in Newton step", best);
    cplx step = v.value / v.derivative;
    const double len = std::abs(step);
    r.steps.push_back(len);
    r.iterations = it;
    if (len < best_step) {
      best_step = len;
      best = w;
    }
    if (len > max_jump) step *= max_jump / len;
    w -= step;
    if (len <= opt.tol * std::max(std::abs(w), 1.0 / tau)) {
      converged = true;
      r.newton_residual = len;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("Newton did not converge in " + std::to_string(opt.max_iterations) +
                               " iterations",
                           best);
  }
  if (std::abs(w) < 1e-3 * kPi / tau) {
    throw ConvergenceError("Newton converged toward the excluded threshold omega = 0", w);
  }
  if (w.imag() >= 0.0) throw ConvergenceError("limit has Im omega >= 0: not a resonance", w);
  r.omega = w;

  if (opt.check_multiplicity) {
    const double rad = std::min(0.1 * kPi / tau, 0.5 * std::abs(w.imag()));
    const SearchBox small{w.real() - rad, w.real() + rad, w.imag() - rad,
                          std::min(w.imag() + rad, 0.0)};
    r.multiplicity = count_zeros(ev, small).count;
  }
  return r;
}

SearchBox index_box(double tau, double offset, int n, double depth, double box_top) {
  const double centre = kPi * (n + offset) / tau;
  return SearchBox{centre - 0.5 * kPi / tau, centre + 0.5 * kPi / tau, -depth, box_top};
}

double audit_depth(const AsymptoticModel& am, int n) {
  const double tau = am.tau;
  double depth = 0.0;
  switch (am.tag) {
    case SmoothnessTag::CaseI:
      depth = std::abs(std::log(std::abs(am.xi))) / (2.0 * tau) + 2.0 / tau;
      break;
    case SmoothnessTag::CaseII:
      depth = (std::log(std::abs(2.0 * kPi * n)) + 3.0) / tau;
      break;
    case SmoothnessTag::CaseIII:
      depth = 2.0 * (std::log(std::abs(2.0 * kPi * n)) + 3.0) / tau;
      break;
    case SmoothnessTag::Unclassified:
      throw DomainError("no audit depth law for an unclassified profile");
  }
  return std::max(depth, -asymptotic_resonance(am, n).imag() + 2.0 / tau);
}

namespace {

struct IndexOutcome {
  std::optional<Resonance> resonance;
  int box_count = -1;
  std::string error;
};

// Local minima of |Ŵ| on a grid inside the box, smallest first.
std::vector<cplx> grid_minima(const WronskianEvaluator& ev, const SearchBox& box, int nre, int nim) {
  std::vector<double> a(static_cast<std::size_t>(nre * nim));
  std::vector<cplx> w(a.size());
  for (int j = 0; j < nim; ++j) {
    for (int i = 0; i < nre; ++i) {
      const cplx z(box.re_lo + (box.re_hi - box.re_lo) * (i + 0.5) / nre,
                   box.im_lo + (box.im_hi - box.im_lo) * (j + 0.5) / nim);
      const auto k = static_cast<std::size_t>(j * nre + i);
      w[k] = z;
      a[k] = std::abs(ev.wronskian(z));
    }
  }
  std::vector<std::pair<double, cplx>> minima;
  for (int j = 0; j < nim; ++j) {
    for (int i = 0; i < nre; ++i) {
      const auto k = static_cast<std::size_t>(j * nre + i);
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nre || jj >= nim) continue;
          if (a[static_cast<std::size_t>(jj * nre + ii)] < a[k]) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) minima.emplace_back(a[k], w[k]);
    }
  }
  std::sort(minima.begin(), minima.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<cplx> out;
  for (const auto& m : minima) out.push_back(m.second);
  return out;
}

}  // namespace

EnumerationResult enumerate_resonances(const WronskianEvaluator& ev, int n_lo, int n_hi,
                                       const EnumerateOptions& opt) {
  if (n_lo > n_hi) throw DomainError("empty index range");
  EnumerationResult res;
  const double tau = ev.tau();
  const EndpointData ed = endpoint_data(ev.model());
  res.classification = classify_smoothness(ed, opt.classification_tol);
  const SmoothnessTag tag = opt.force_case.value_or(res.classification.tag);
  if (tag != SmoothnessTag::Unclassified) {
    try {
      res.asymptotics = make_asymptotic_model(ed, tau, tag, opt.theta_normalization,
                                              opt.classification_tol);
    } catch (const DomainError& e) {
      res.notices.push_back(std::string("asymptotic seeding unavailable: ") + e.what());
    }
  } else {
    res.notices.push_back("profile is unclassified: using grid-search seeds");
  }
  res.lattice_offset = res.asymptotics ? res.asymptotics->lattice_offset() : 0.0;
  const double offset = res.lattice_offset;

  std::vector<int> indices;
  for (int n = n_lo; n <= n_hi; ++n) {
    if (n == 0 && offset == 0.0) {
      res.notices.push_back("n = 0 skipped (threshold exclusion)");
      continue;
    }
    indices.push_back(n);
  }

  double depth = opt.unclassified_depth / tau;
  if (res.asymptotics) {
    depth = 0.0;
    for (int n : indices) depth = std::max(depth, audit_depth(*res.asymptotics, n));
  }
  if (depth > ev.max_depth()) {
    res.notices.push_back("audit depth clamped to the evaluator scan depth");
    depth = ev.max_depth();
  }
  res.audit_depth = depth;
  const double top = opt.box_top / tau;

  std::vector<IndexOutcome> outcomes(indices.size());
  opt.executor(indices.size(), [&](std::size_t k) {
    const int n = indices[k];
    const SearchBox box = index_box(tau, offset, n, depth, top);
    auto in_box = [&](const Resonance& r) { return box.contains(r.omega); };
    IndexOutcome& out = outcomes[k];

    std::string seed_note;
    if (res.asymptotics) {
      try {
        Resonance r = refine(ev, asymptotic_resonance(*res.asymptotics, n), opt.refine);
        if (in_box(r)) {
          out.resonance = std::move(r);
        } else {
          seed_note = "asymptotic seed converged outside its index box";
        }
      } catch (const Error& e) {
        seed_note = e.what();
      }
    }
    if (!out.resonance) {
      try {
        for (cplx s : grid_minima(ev, box, opt.fallback_grid_re, opt.fallback_grid_im)) {
          try {
            Resonance r = refine(ev, s, opt.refine);
            if (in_box(r)) {
              out.resonance = std::move(r);
              break;
            }
          } catch (const Error&) {
          }
        }
      } catch (const Error& e) {
        seed_note += std::string("; grid search failed: ") + e.what();
      }
    }
    if (out.resonance) out.resonance->n = n;
    if (opt.audit) {
      try {
        out.box_count = count_zeros(ev, box, opt.contour).count;
      } catch (const Error& e) {
        out.error = std::string("audit failed: ") + e.what();
      }
      if (out.resonance) out.resonance->box_count = out.box_count;
    }
    if (!out.resonance) {
      out.error = "no zero found in index box" + (seed_note.empty() ? "" : " (" + seed_note + ")") +
                  (out.box_count >= 0 ? "; audit count " + std::to_string(out.box_count) : "");
    } else if (out.error.empty() && out.box_count >= 0 && out.box_count != 1) {
      out.error = "audit: index box contains " + std::to_string(out.box_count) + " zeros";
    }
  });

  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (outcomes[k].resonance) res.resonances.push_back(*outcomes[k].resonance);
    if (!outcomes[k].error.empty()) res.failures.push_back({indices[k], outcomes[k].error});
  }

  // Conjugate-pair symmetry.
  std::map<int, cplx> by_n;
  for (const auto& r : res.resonances) by_n[r.n] = r.omega;
  for (const auto& [n, w] : by_n) {
    const int partner = offset == 0.0 ? -n : -n - 1;
    if (partner <= n) continue;
    auto it = by_n.find(partner);
    if (it == by_n.end()) continue;
    const double scale = std::max(std::abs(w) * tau, 1.0) / tau;
    if (std::abs(it->second + std::conj(w)) > 1e-8 * scale) {
      res.symmetric = false;
      res.failures.push_back({n, "conjugate partner " + std::to_string(partner) + " is not -conj"});
    }
  }

  if (opt.audit && indices.empty()) res.complete = true;
  if (opt.audit && !indices.empty()) {
    // Union boxes over contiguous index blocks (negative and positive sides).
    std::vector<std::pair<int, int>> blocks;
    for (int n : indices) {
      if (!blocks.empty() && blocks.back().second + 1 == n &&
          !(offset == 0.0 && n == 1 && blocks.back().second == -1)) {
        blocks.back().second = n;
      } else {
        blocks.emplace_back(n, n);
      }
    }
    try {
      for (const auto& [a, b] : blocks) {
        SearchBox u = index_box(tau, offset, a, depth, top);
        u.re_hi = index_box(tau, offset, b, depth, top).re_hi;
        res.union_count += count_zeros(ev, u, opt.contour).count;
      }
    } catch (const Error& e) {
      res.notices.push_back(std::string("completeness audit failed: ") + e.what());
      res.union_count = -1;
    }
    for (const auto& o : outcomes) res.box_count_sum += std::max(o.box_count, 0);
    res.complete = res.union_count == res.box_count_sum &&
                   res.box_count_sum == static_cast<int>(res.resonances.size());
  }
  std::sort(res.failures.begin(), res.failures.end(),
            [](const auto& a, const auto& b) { return a.n < b.n; });
  return res;
}

namespace {

std::string audit_flag(const Resonance& r) {
  if (r.box_count < 0) return "skipped";
  return r.box_count == 1 ? "ok" : "fail";
}

}  // namespace

void write_resonances_csv(std::ostream& out, const EnumerationResult& result) {
  out << "n,re_omega,im_omega,re_seed,im_seed,residual,audit\n";
  for (const auto& r : result.resonances) {
    out << r.n << ',' << format_double(r.omega.real()) << ',' << format_double(r.omega.imag()) << ','
        << format_double(r.seed.real()) << ',' << format_double(r.seed.imag()) << ','
        << format_double(r.newton_residual) << ',' << audit_flag(r) << '\n';
  }
}

void write_resonances_json(std::ostream& out, const EnumerationResult& result,
                           const std::string& metadata_json) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::parse(metadata_json);
  j["classification"] = std::string(to_string(result.classification.tag));
  j["lattice_offset"] = result.lattice_offset;
  j["audit_depth"] = result.audit_depth;
  j["union_count"] = result.union_count;
  j["box_count_sum"] = result.box_count_sum;
  j["complete"] = result.complete;
  j["symmetric"] = result.symmetric;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : result.resonances) {
    rows.push_back({{"n", r.n},
                    {"re_omega", r.omega.real()},
                    {"im_omega", r.omega.imag()},
                    {"re_seed", r.seed.real()},
                    {"im_seed", r.seed.imag()},
                    {"residual", r.newton_residual},
                    {"iterations", r.iterations},
                    {"audit", audit_flag(r)}});
  }
  j["resonances"] = rows;
  auto fails = nlohmann::ordered_json::array();
  for (const auto& f : result.failures) fails.push_back({{"n", f.n}, {"message", f.message}});
  j["failures"] = fails;
  j["notices"] = result.notices;
  out << j.dump(2) << '\n';
}

}  // namespace stratres
