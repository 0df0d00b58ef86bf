// Command-line driver: resonances, compare, scatter, validate.
//
// Exit codes: 0 success, 1 invalid input or I/O failure, 2 the computation
// ran but flagged items (audit failures, failed checks, no usable peaks) or
// aborted on a numerical error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "stratres/asymptotics.hpp"
#include "stratres/errors.hpp"
#include "stratres/format.hpp"
#include "stratres/liouville.hpp"
#include "stratres/profile_io.hpp"
#include "stratres/resonances.hpp"
#include "stratres/scattering.hpp"
#include "stratres/wronskian.hpp"

namespace fs = std::filesystem;
using namespace stratres;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string command;
  std::string profile;
  int n_lo = 1;
  int n_hi = 20;
  int fit_min = 10;
  std::optional<double> omega_min, omega_max;
  int omega_steps = 2000;
  std::optional<double> tol;
  double prominence = 0.05;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned jobs = 1;
  std::string force_case;
  std::string theta = "chim_chip";
};

unsigned default_jobs() {
  if (const char* env = std::getenv("STRATRES_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j > 0) return static_cast<unsigned>(j);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

IntegratorTolerances tolerances_or(const RunConfig& cfg, IntegratorTolerances fallback) {
  if (!cfg.tol) return fallback;
  return IntegratorTolerances{*cfg.tol, *cfg.tol * 1e-2};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("profile", "cannot open profile file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Everything that determines the numbers, and nothing that does not (jobs, out).
std::string config_hash(const RunConfig& cfg, const std::string& profile_text) {
  std::ostringstream key;
  key << cfg.command << '|' << profile_text << '|' << cfg.n_lo << ',' << cfg.n_hi << ','
      << cfg.fit_min << ',' << (cfg.omega_min ? format_double(*cfg.omega_min) : "-") << ','
      << (cfg.omega_max ? format_double(*cfg.omega_max) : "-") << ',' << cfg.omega_steps << ','
      << (cfg.tol ? format_double(*cfg.tol) : "-") << ',' << format_double(cfg.prominence) << ','
      << cfg.force_case << ',' << cfg.theta;
  return fnv1a_hex(key.str());
}

std::string metadata(const RunConfig& cfg, const std::string& hash, const IntegratorTolerances& tol,
                     double tau) {
  nlohmann::ordered_json m;
  m["command"] = cfg.command;
  m["version"] = kVersion;
  m["config_hash"] = hash;
  m["profile"] = fs::path(cfg.profile).filename().string();
  m["tolerances"] = {{"rel", tol.rel}, {"abs", tol.abs}};
  m["tau"] = tau;
  return m.dump();
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  const fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream out(p);
  if (!out) throw ValidationError("out", "cannot write '" + p.string() + "'");
  return out;
}

std::optional<SmoothnessTag> parse_case(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "i") return SmoothnessTag::CaseI;
  if (s == "ii") return SmoothnessTag::CaseII;
  return SmoothnessTag::CaseIII;
}

ThetaNormalization parse_theta(const std::string& s) {
  if (s == "chi0_chim") return ThetaNormalization::Chi0ChiMinus;
  if (s == "chi0_chi1") return ThetaNormalization::Chi0Chi1;
  return ThetaNormalization::ChiMinusChiPlus;
}

EnumerateOptions enumerate_options(const RunConfig& cfg) {
  EnumerateOptions opt;
  opt.force_case = parse_case(cfg.force_case);
  opt.theta_normalization = parse_theta(cfg.theta);
  opt.executor = make_thread_executor(cfg.jobs);
  return opt;
}

void print_notices(const EnumerationResult& res) {
  for (const auto& n : res.notices) std::cerr << "notice: " << n << '\n';
  for (const auto& f : res.failures) std::cerr << "index " << f.n << ": " << f.message << '\n';
}

bool enumeration_flagged(const EnumerationResult& res) {
  return !res.failures.empty() || !res.complete;
}

int cmd_resonances(const RunConfig& cfg, const MediumModel& model, const std::string& hash) {
  const auto tol = tolerances_or(cfg, IntegratorTolerances{});
  const WronskianEvaluator ev(model, tol);
  const auto res = enumerate_resonances(ev, cfg.n_lo, cfg.n_hi, enumerate_options(cfg));
  if (cfg.format == "json") {
    auto out = open_output(cfg, "resonances.json");
    write_resonances_json(out, res, metadata(cfg, hash, tol, ev.tau()));
  } else {
    auto out = open_output(cfg, "resonances.csv");
    write_resonances_csv(out, res);
  }
  std::cout << "classification: " << to_string(res.classification.tag) << '\n'
            << "tau: " << format_double(ev.tau()) << '\n'
            << "resonances: " << res.resonances.size() << '\n'
            << "audit: union " << res.union_count << ", boxes " << res.box_count_sum
            << (res.complete ? ", complete" : ", incomplete") << '\n';
  print_notices(res);
  return enumeration_flagged(res) ? 2 : 0;
}

int cmd_compare(const RunConfig& cfg, const MediumModel& model, const std::string& hash) {
  const auto tol = tolerances_or(cfg, IntegratorTolerances{});
  const WronskianEvaluator ev(model, tol);
  auto opt = enumerate_options(cfg);
  const auto res = enumerate_resonances(ev, cfg.n_lo, cfg.n_hi, opt);
  std::cout << "classification: " << to_string(res.classification.tag) << '\n'
            << "tau: " << format_double(ev.tau()) << '\n';
  print_notices(res);

  if (!res.asymptotics) {
    std::cout << "asymptotics: unavailable\n";
    if (cfg.format == "json") {
      auto out = open_output(cfg, "compare.json");
      nlohmann::ordered_json j;
      j["metadata"] = nlohmann::ordered_json::parse(metadata(cfg, hash, tol, ev.tau()));
      j["classification"] = std::string(to_string(res.classification.tag));
      j["asymptotics"] = "unavailable";
      out << j.dump(2) << '\n';
    } else {
      auto out = open_output(cfg, "compare.csv");
      out << "n,error\n";
    }
    return 0;
  }

  CompareOptions copt;
  copt.n_fit_min = cfg.fit_min;
  const auto rep = compare(res.resonances, *res.asymptotics, copt);
  if (cfg.format == "json") {
    auto out = open_output(cfg, "compare.json");
    std::ostringstream body;
    write_comparison_json(body, rep);
    auto j = nlohmann::ordered_json::parse(body.str());
    nlohmann::ordered_json wrapped;
    wrapped["metadata"] = nlohmann::ordered_json::parse(metadata(cfg, hash, tol, ev.tau()));
    for (auto& [k, v] : j.items()) wrapped[k] = v;
    out << wrapped.dump(2) << '\n';
  } else {
    auto out = open_output(cfg, "compare.csv");
    write_comparison_csv(out, rep);
  }
  std::cout << "fit points: " << rep.fit_points << '\n'
            << "slope: " << format_double(rep.fitted_slope) << " (expected "
            << format_double(rep.expected_slope) << ")" << (rep.slope_ok ? " ok" : " MISMATCH") << '\n'
            << "intercept: " << format_double(rep.pinned_intercept) << " (expected "
            << format_double(rep.expected_intercept) << ")"
            << (rep.intercept_ok ? " ok" : " MISMATCH") << '\n';
  if (rep.theta) {
    std::cout << "theta normalization: " << to_string(rep.theta->best)
              << (rep.theta->unique ? " (unique)" : " (ambiguous)") << '\n';
  }
  const bool flagged = enumeration_flagged(res) || !rep.slope_ok ||
                       !rep.intercept_ok || (rep.theta && !rep.theta->unique);
  return flagged ? 2 : 0;
}

struct ScanRange {
  double lo, hi;
};

ScanRange scan_range(const RunConfig& cfg, double tau) {
  const ScanRange r{cfg.omega_min.value_or(0.5 * kPi / tau), cfg.omega_max.value_or(40.5 * kPi / tau)};
  if (!(r.lo < r.hi)) throw ValidationError("omega-max", "omega range is empty");
  return r;
}

int cmd_scatter(const RunConfig& cfg, const MediumModel& model, const std::string& hash) {
  const auto tol = tolerances_or(cfg, kScatteringTolerances);
  const WronskianEvaluator ev(model, tol);
  const auto range = scan_range(cfg, ev.tau());
  const auto samples = reflection_scan(ev, range.lo, range.hi, cfg.omega_steps,
                                       make_thread_executor(cfg.jobs));
  double flux = 0.0;
  std::vector<double> w, obs;
  for (const auto& s : samples) {
    flux = std::max(flux, s.flux_residual);
    w.push_back(s.omega);
    obs.push_back(std::log(std::max(std::abs(s.r), 1e-300)));
  }
  std::cout << "tau: " << format_double(ev.tau()) << '\n'
            << "max flux residual: " << format_double(flux) << '\n';

  std::optional<std::vector<Peak>> peaks;
  std::optional<TauEstimate> est;
  std::string peak_error;
  try {
    peaks = detect_peaks(w, obs, PeakOptions{cfg.prominence});
    est = estimate_tau(*peaks);
  } catch (const DomainError& e) {
    peak_error = e.what();
  }

  if (cfg.format == "json") {
    auto out = open_output(cfg, "scatter.json");
    if (peaks) {
      write_peaks_json(out, *peaks, *est, ev.tau(), metadata(cfg, hash, tol, ev.tau()));
    } else {
      nlohmann::ordered_json j;
      j["metadata"] = nlohmann::ordered_json::parse(metadata(cfg, hash, tol, ev.tau()));
      j["tau_quadrature"] = ev.tau();
      j["peaks"] = nlohmann::ordered_json::array();
      j["notice"] = peak_error;
      out << j.dump(2) << '\n';
    }
  } else {
    auto out = open_output(cfg, "spectrum.csv");
    write_spectrum_csv(out, samples);
  }

  if (!peaks) {
    std::cerr << "notice: no peaks usable for spacing (" << peak_error << ")\n";
    return 2;
  }
  std::cout << "peaks: " << peaks->size() << '\n'
            << "tau estimate: " << format_double(est->tau_hat) << " (relative error "
            << format_double(std::abs(est->tau_hat - ev.tau()) / ev.tau()) << ")\n";
  return 0;
}

struct Check {
  std::string name;
  std::optional<double> value;  // nullopt: skipped
  double tolerance;
  std::string note;

  bool passed() const { return !value || *value < tolerance; }
  std::string status() const { return !value ? "skipped" : (passed() ? "pass" : "fail"); }
};

int cmd_validate(const RunConfig& cfg, const MediumModel& model, const std::string& hash) {
  const auto tol = tolerances_or(cfg, kScatteringTolerances);
  const WronskianEvaluator ev(model, tol);
  const double tau = ev.tau();
  const auto exec = make_thread_executor(cfg.jobs);
  std::vector<Check> checks;

  {
    Check c{"oracle_equivalence", std::nullopt, 1e-9, "layer is not piecewise constant"};
    if (model.layer().piecewise_constant()) {
      // Grid nodes can sit close to zeros, where relative error is amplified.
      const WronskianEvaluator fine(model, tolerances_or(cfg, IntegratorTolerances{1e-13, 1e-15}));
      constexpr int kGrid = 20;
      std::vector<double> rel(kGrid * kGrid);
      exec(rel.size(), [&](std::size_t k) {
        const double re = kPi / tau + (29.0 * kPi / tau) * static_cast<double>(k % kGrid) / (kGrid - 1);
        const double im = -3.0 / tau + (2.99 / tau) * static_cast<double>(k / kGrid) / (kGrid - 1);
        const cplx w(re, im);
        const cplx exact = transfer_matrix_wronskian(model, w);
        rel[k] = std::abs(fine.wronskian(w) - exact) / std::abs(exact);
      });
      c.value = *std::max_element(rel.begin(), rel.end());
      c.note = "max relative error on a 20x20 grid";
    }
    checks.push_back(c);
  }
  {
    const auto range = scan_range(cfg, tau);
    const auto samples = reflection_scan(ev, range.lo, range.hi, cfg.omega_steps, exec);
    double mx = 0.0;
    for (const auto& s : samples) mx = std::max(mx, s.flux_residual);
    checks.push_back(Check{"flux_conservation", mx, 1e-10,
                           "max over " + std::to_string(cfg.omega_steps) + " real samples"});
  }
  {
    Check c{"liouville_residual", std::nullopt, 1e-6, "layer is not smooth"};
    if (model.layer().smooth_interior()) {
      const TravelTimeChart chart(model);
      const auto zs = uniform_travel_time_grid(chart, 800);
      const cplx omegas[] = {{5.0, 0.0}, {5.0, -1.0}, {10.0, -0.5}, {15.0, -2.0}, {20.0, -1.0}};
      double worst = 0.0;
      for (cplx w : omegas) {
        w /= tau;
        worst = std::max(worst, verify_transform(model, chart, w, ev.jost_plus_samples(w, zs)));
      }
      c.value = worst;
      c.note = "max over 5 complex frequencies";
    }
    checks.push_back(c);
  }

  if (cfg.format == "json") {
    auto out = open_output(cfg, "validate.json");
    nlohmann::ordered_json j;
    j["metadata"] = nlohmann::ordered_json::parse(metadata(cfg, hash, tol, tau));
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      arr.push_back({{"check", c.name},
                     {"value", c.value ? nlohmann::ordered_json(*c.value) : nlohmann::ordered_json()},
                     {"tolerance", c.tolerance},
                     {"status", c.status()},
                     {"note", c.note}});
    }
    j["checks"] = arr;
    out << j.dump(2) << '\n';
  } else {
    auto out = open_output(cfg, "validate.csv");
    out << "check,value,tolerance,status\n";
    for (const auto& c : checks) {
      out << c.name << ',' << (c.value ? format_double(*c.value) : "") << ','
          << format_double(c.tolerance) << ',' << c.status() << '\n';
    }
  }
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << c.name << ": " << c.status();
    if (c.value) std::cout << " (" << format_double(*c.value) << " < " << format_double(c.tolerance) << ")";
    std::cout << " " << c.note << '\n';
    ok = ok && c.passed();
  }
  return ok ? 0 : 2;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--profile", cfg.profile, "Profile JSON file")->required();
  sub->add_option("--tol", cfg.tol, "Relative integrator tolerance (absolute = tol/100)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out_dir, "Output directory");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", cfg.jobs, "Worker threads (default $STRATRES_JOBS or 1)")
      ->check(CLI::Range(1u, 1024u));
}

void add_index_range(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--n-lo", cfg.n_lo, "First resonance index");
  sub->add_option("--n-hi", cfg.n_hi, "Last resonance index");
  sub->add_option("--force-case", cfg.force_case, "Override the smoothness classification")
      ->check(CLI::IsMember({"i", "ii", "iii"}));
  sub->add_option("--theta", cfg.theta, "Case-ii constant normalization used for seeding")
      ->check(CLI::IsMember({"chi0_chim", "chi0_chi1", "chim_chip"}));
}

void add_scan(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--omega-min", cfg.omega_min, "Scan start (default 0.5 pi/tau)");
  sub->add_option("--omega-max", cfg.omega_max, "Scan end (default 40.5 pi/tau)");
  sub->add_option("--omega-steps", cfg.omega_steps, "Number of scan samples")
      ->check(CLI::Range(2, 10000000));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering resonances of a stratified layer between two half-spaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.jobs = default_jobs();

  auto* res = app.add_subcommand("resonances", "Enumerate and audit resonances");
  add_common(res, cfg);
  add_index_range(res, cfg);

  auto* cmp = app.add_subcommand("compare", "Compare resonances with the asymptotic law");
  add_common(cmp, cfg);
  add_index_range(cmp, cfg);
  cmp->add_option("--fit-min", cfg.fit_min, "Smallest |n| used in the fit");

  auto* sct = app.add_subcommand("scatter", "Reflection spectrum, peaks and travel-time estimate");
  add_common(sct, cfg);
  add_scan(sct, cfg);
  sct->add_option("--prominence", cfg.prominence, "Peak prominence as a fraction of the range");

  auto* val = app.add_subcommand("validate", "Oracle, flux and transform checks on a profile");
  add_common(val, cfg);
  add_scan(val, cfg);

  // Defaults that differ per command must be set before parsing.
  cmp->preparse_callback([&](std::size_t) { cfg.n_hi = 60; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  std::optional<MediumModel> model;
  std::string text;
  try {
    if (cfg.n_lo > cfg.n_hi) throw ValidationError("n-hi", "index range is empty");
    text = read_file(cfg.profile);
    model.emplace(build_profile(text));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  const std::string hash = config_hash(cfg, text);
  try {
    if (cfg.command == "resonances") return cmd_resonances(cfg, *model, hash);
    if (cfg.command == "compare") return cmd_compare(cfg, *model, hash);
    if (cfg.command == "scatter") return cmd_scatter(cfg, *model, hash);
    return cmd_validate(cfg, *model, hash);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
