// Experiment runner: counterexample and Born sweeps, verification suites,
// and decay fits, driven by flags plus an optional flat key=value config
// file (flags win). Exit codes: 0 pass, 1 config error, 2 numerical
// diagnostic, 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "backscatter/born.hpp"
#include "backscatter/decay.hpp"
#include "backscatter/errors.hpp"
#include "backscatter/io.hpp"
#include "backscatter/parallel.hpp"
#include "backscatter/potentials.hpp"
#include "backscatter/regularity.hpp"
#include "backscatter/verify.hpp"

namespace bs = backscatter;
using json = nlohmann::ordered_json;

namespace {

// Binds CLI options to config-file keys: a key in the file sets the option
// only when the flag was not passed, and unknown keys are rejected.
class ConfigBinder {
 public:
  void bind(CLI::Option* opt, std::string key, std::function<void(const std::string&)> set,
            std::function<json()> get) {
    items_.push_back({std::move(key), opt, std::move(set), std::move(get)});
  }

  CLI::Option* add_double(CLI::App& app, const std::string& flag, const std::string& key,
                          double& var, const std::string& desc) {
    CLI::Option* opt = app.add_option(flag, var, desc);
    bind(
        opt, key,
        [&var, key](const std::string& s) {
          try {
            std::size_t pos = 0;
            var = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
          } catch (...) {
            throw std::invalid_argument("config key " + key + ": bad number '" + s + "'");
          }
        },
        [&var] { return json(var); });
    return opt;
  }

  CLI::Option* add_int(CLI::App& app, const std::string& flag, const std::string& key, int& var,
                       const std::string& desc) {
    CLI::Option* opt = app.add_option(flag, var, desc);
    bind(
        opt, key,
        [&var, key](const std::string& s) {
          try {
            std::size_t pos = 0;
            var = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
          } catch (...) {
            throw std::invalid_argument("config key " + key + ": bad integer '" + s + "'");
          }
        },
        [&var] { return json(var); });
    return opt;
  }

  CLI::Option* add_uint64(CLI::App& app, const std::string& flag, const std::string& key,
                          std::uint64_t& var, const std::string& desc) {
    CLI::Option* opt = app.add_option(flag, var, desc);
    bind(
        opt, key,
        [&var, key](const std::string& s) {
          try {
            std::size_t pos = 0;
            var = std::stoull(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
          } catch (...) {
            throw std::invalid_argument("config key " + key + ": bad integer '" + s + "'");
          }
        },
        [&var] { return json(var); });
    return opt;
  }

  CLI::Option* add_string(CLI::App& app, const std::string& flag, const std::string& key,
                          std::string& var, const std::string& desc) {
    CLI::Option* opt = app.add_option(flag, var, desc);
    bind(
        opt, key, [&var](const std::string& s) { var = s; }, [&var] { return json(var); });
    return opt;
  }

  CLI::Option* add_flag(CLI::App& app, const std::string& flag, const std::string& key,
                        bool& var, const std::string& desc) {
    CLI::Option* opt = app.add_flag(flag, var, desc);
    bind(
        opt, key,
        [&var, key](const std::string& s) {
          if (s == "true" || s == "1")
            var = true;
          else if (s == "false" || s == "0")
            var = false;
          else
            throw std::invalid_argument("config key " + key + ": bad bool '" + s + "'");
        },
        [&var] { return json(var); });
    return opt;
  }

  void apply(const std::map<std::string, std::string>& kv) const {
    for (const auto& [key, value] : kv) {
      const auto it = std::find_if(items_.begin(), items_.end(),
                                   [&](const Item& item) { return item.key == key; });
      if (it == items_.end()) throw std::invalid_argument("unknown config key: " + key);
      if (it->opt->count() == 0) it->set(value);
    }
  }

  json resolved() const {
    json out = json::object();
    for (const Item& item : items_) out[item.key] = item.get();
    return out;
  }

 private:
  struct Item {
    std::string key;
    CLI::Option* opt;
    std::function<void(const std::string&)> set;
    std::function<json()> get;
  };
  std::vector<Item> items_;
};

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  int threads = bs::default_threads();
  bool serial = false;
  std::uint64_t seed = 20250810;

  int effective_threads() const { return serial ? 1 : threads; }
};

void add_common(CLI::App& cmd, ConfigBinder& binder, CommonOpts& opts) {
  cmd.add_option("--config", opts.config_path, "flat key=value config file (flags win)");
  binder.add_string(cmd, "--out-dir", "out.dir", opts.out_dir, "output directory");
  binder.add_int(cmd, "--threads", "threads", opts.threads, "parallelism degree");
  binder.add_flag(cmd, "--serial", "serial", opts.serial, "single-threaded reference mode");
  binder.add_uint64(cmd, "--seed", "seed", opts.seed, "seed for randomized suites");
}

void finish_config(const CLI::App&, ConfigBinder& binder, const CommonOpts& opts) {
  if (!opts.config_path.empty()) binder.apply(bs::parse_config_file(opts.config_path));
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
}

json fit_json(const bs::DecayFit& fit) {
  return json{{"exponent", fit.exponent},
              {"log_amplitude", fit.log_amplitude},
              {"window", {fit.rho_lo, fit.rho_hi}},
              {"residual_rms", fit.residual_rms},
              {"points", fit.point_count}};
}

struct PVFlags {
  bs::PVScheme scheme;
  std::string near = "symmetric_reflection";

  void add(CLI::App& cmd, ConfigBinder& binder) {
    binder.add_double(cmd, "--pv-delta", "pv.delta", scheme.delta, "PV window half-width");
    binder.add_int(cmd, "--pv-panel-order", "pv.panel_order", scheme.panel_order,
                   "PV Gauss-Legendre panel order");
    binder.add_double(cmd, "--pv-r-max", "pv.r_max", scheme.r_max, "PV truncation radius");
    binder.add_double(cmd, "--pv-tail-tol", "pv.tail_tol", scheme.tail_tol,
                      "relative tail truncation tolerance");
    binder.add_string(cmd, "--pv-near-scheme", "pv.near_scheme", near,
                      "symmetric_reflection | taylor_subtraction");
  }

  bs::PVScheme resolve() const {
    bs::PVScheme s = scheme;
    if (near == "symmetric_reflection")
      s.near_scheme = bs::NearScheme::symmetric_reflection;
    else if (near == "taylor_subtraction")
      s.near_scheme = bs::NearScheme::taylor_subtraction;
    else
      throw std::invalid_argument("pv.near_scheme: unknown scheme '" + near + "'");
    s.validate();
    return s;
  }
};

int run_counterexample(const CommonOpts& common, const ConfigBinder& binder, int n, double beta,
                       double eta_min, double eta_max, int points, double window_lo,
                       double window_hi, const PVFlags& pv, int quad_order, int quad_levels,
                       bool band) {
  const auto t0 = std::chrono::steady_clock::now();
  bs::CounterexampleOptions opts;
  opts.scheme = pv.resolve();
  opts.quad_order = quad_order;
  opts.quad_levels = quad_levels;
  opts.window_lo = window_lo;
  opts.window_hi = window_hi;
  opts.band_diagnostic = band;
  opts.threads = common.effective_threads();
  const bs::Grid1D grid(eta_min, eta_max, points, bs::Spacing::logarithmic);
  const bs::CounterexampleReport report = bs::counterexample_experiment(n, beta, grid, opts);
  const bs::Q2CountCheck check = bs::q2count_check(n, beta, report);

  std::filesystem::create_directories(common.out_dir);
  {
    std::ofstream csv(std::filesystem::path(common.out_dir) / "counterexample.csv");
    csv << "eta_abs,s,re_q2,im_q2\n";
    char buf[160];
    for (std::size_t i = 0; i < report.eta.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", report.eta[i],
                    report.s_values[i], report.q2_values[i].real(),
                    report.q2_values[i].imag());
      csv << buf;
    }
  }

  json entries = json::array();
  entries.push_back({{"n", n},
                     {"beta", beta},
                     {"j", 2},
                     {"operation", "fit_decay(s_r(q_beta))"},
                     {"fitted", report.s_fit.exponent},
                     {"predicted", report.p},
                     {"window", {window_lo, window_hi}},
                     {"residual", report.s_fit.residual_rms},
                     {"margin", report.margin},
                     {"pass", report.pass_upper && report.pass_margin}});
  entries.push_back({{"n", n},
                     {"beta", beta},
                     {"j", 2},
                     {"operation", "q2count_check(Im q2_hat)"},
                     {"fitted", report.im_q2_fit->exponent},
                     {"predicted", check.ceiling + 0.5 * n},
                     {"window", {window_lo, window_hi}},
                     {"residual", report.im_q2_fit->residual_rms},
                     {"identity_gap", check.identity_gap},
                     {"membership_ceiling", check.ceiling},
                     {"measured_ceiling", check.measured_ceiling},
                     {"pass", check.pass}});
  if (report.band_fit)
    entries.push_back({{"n", n},
                       {"beta", beta},
                       {"j", 2},
                       {"operation", "fit_decay(band A(eta))"},
                       {"fitted", report.band_fit->exponent},
                       {"predicted", 2.0 * beta + 2.0},
                       {"window", {window_lo, window_hi}},
                       {"residual", report.band_fit->residual_rms},
                       {"pass", true}});

  const bool pass = report.pass_upper && report.pass_margin && check.pass;
  json out{{"command", "counterexample"},
           {"config", binder.resolved()},
           {"n", n},
           {"beta", beta},
           {"p", report.p},
           {"s_fit", fit_json(report.s_fit)},
           {"im_q2_fit", fit_json(*report.im_q2_fit)},
           {"open_gap", report.open_gap},
           {"open_gap_note",
            report.open_gap ? "open-gap datapoint: theorem lines shown without pass/fail"
                            : ""},
           {"entries", entries},
           {"pass", pass}};
  write_json(std::filesystem::path(common.out_dir) / "counterexample_report.json", out);

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("counterexample n=%d beta=%g: p=%g fitted=%.4f margin=%+.4f %s\n", n, beta,
              report.p, report.s_fit.exponent, report.margin, pass ? "PASS" : "FAIL");
  std::printf("runtime: %.2f s\n", secs);
  return pass ? 0 : 2;
}

int run_born(const CommonOpts& common, const ConfigBinder& binder, int n, double beta, int order,
             const std::string& profile_kind, double gauss_a, double c0, double eta_min,
             double eta_max, int points, double window_lo, double window_hi, const PVFlags& pv,
             int quad_order, int quad_levels) {
  const auto t0 = std::chrono::steady_clock::now();
  if (order != 2 && order != 3)
    throw std::invalid_argument("born: unsupported order " + std::to_string(order) +
                                " (J in {2,3})");
  bs::PotentialSpec spec;
  spec.dim = n;
  if (profile_kind == "bessel") {
    spec.kind = bs::PotentialSpec::Kind::bessel_power;
    spec.beta = beta;
  } else if (profile_kind == "gaussian") {
    spec.kind = bs::PotentialSpec::Kind::gaussian;
    spec.a = gauss_a;
  } else {
    throw std::invalid_argument("born: unknown profile '" + profile_kind + "'");
  }
  const bs::RadialProfile qhat = bs::make_profile(spec);

  bs::BornOptions opts;
  opts.cutoff.c0 = c0;
  opts.scheme = pv.resolve();
  opts.quad_order = quad_order;
  opts.quad_levels = quad_levels;
  opts.threads = common.effective_threads();
  const bs::Grid1D grid(eta_min, eta_max, points, bs::Spacing::logarithmic);
  const bs::BornResult result = bs::born_approx(qhat, order, n, grid, opts);
  const bs::SmoothingEntry smoothing = bs::smoothing_check(result, beta, n, window_lo, window_hi);

  std::filesystem::create_directories(common.out_dir);
  bs::write_born_csv(std::filesystem::path(common.out_dir) / "born.csv", result);

  int masked = 0;
  for (char m : result.masked) masked += m;

  json entries = json::array();
  entries.push_back(
      {{"n", n},
       {"beta", beta},
       {"j", 2},
       {"operation", "smoothing_check(residual vs chi qhat)"},
       {"fitted", smoothing.gain},
       {"predicted", smoothing.predicted_gain ? json(*smoothing.predicted_gain) : json()},
       {"required", smoothing.required_gain},
       {"window", {window_lo, window_hi}},
       {"residual", 0.0},
       {"e_q", smoothing.e_q},
       {"e_residual", smoothing.e_residual},
       {"open_gap", smoothing.open_gap},
       {"pass", smoothing.pass}});

  json out{{"command", "born"},
           {"config", binder.resolved()},
           {"n", n},
           {"beta", beta},
           {"order", order},
           {"masked_nodes", masked},
           {"entries", entries},
           {"pass", smoothing.pass}};
  write_json(std::filesystem::path(common.out_dir) / "born_report.json", out);

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("born n=%d %s order=%d: gain=%.4f (e_q=%.3f e_res=%.3f) %s\n", n,
              profile_kind.c_str(), order, smoothing.gain, smoothing.e_q, smoothing.e_residual,
              smoothing.pass ? "PASS" : "FAIL");
  std::printf("runtime: %.2f s\n", secs);
  return smoothing.pass ? 0 : 2;
}

int run_verify_cmd(const CommonOpts& common, const ConfigBinder& binder,
                   const std::string& suite, bool corrupt) {
  const auto t0 = std::chrono::steady_clock::now();
  bs::verify::VerifyOptions opts;
  opts.seed = common.seed;
  opts.only = suite;
  opts.corrupt_quadrature = corrupt;
  opts.threads = common.effective_threads();
  const std::vector<bs::verify::SuiteResult> results = bs::verify::run_verify(opts);
  if (results.empty()) throw std::invalid_argument("verify: unknown suite '" + suite + "'");

  json entries = json::array();
  for (const auto& r : results) {
    std::printf("[%s] %-14s cases=%-4d failures=%-3d %s\n", r.passed() ? "PASS" : "FAIL",
                r.name.c_str(), r.cases, r.failures, r.note.c_str());
    entries.push_back({{"suite", r.name},
                       {"cases", r.cases},
                       {"failures", r.failures},
                       {"worst", r.worst},
                       {"note", r.note},
                       {"pass", r.passed()}});
  }
  const bool pass = bs::verify::all_passed(results);
  if (!common.out_dir.empty()) {
    std::filesystem::create_directories(common.out_dir);
    write_json(std::filesystem::path(common.out_dir) / "verify_report.json",
               json{{"command", "verify"},
                    {"config", binder.resolved()},
                    {"entries", entries},
                    {"pass", pass}});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("verify: %s\n", pass ? "PASS" : "FAIL");
  std::printf("runtime: %.2f s\n", secs);
  return pass ? 0 : 3;
}

int run_decay_fit(const std::string& input, double rho_lo, double rho_hi) {
  const bs::RadialProfile profile = bs::read_profile_csv(input);
  const bs::DecayFit fit = bs::fit_decay(profile, rho_lo, rho_hi);
  std::cout << fit_json(fit).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"backscattering dispersion laboratory"};
  app.require_subcommand(1);

  // counterexample
  auto* ce = app.add_subcommand("counterexample", "exponent sweep of S(q_beta) and Q2");
  ConfigBinder ce_binder;
  CommonOpts ce_common;
  int ce_n = 0, ce_points = 64, ce_qorder = 12, ce_qlevels = 14;
  double ce_beta = 0.0, ce_eta_min = 4.0, ce_eta_max = 1024.0;
  double ce_wlo = 8.0, ce_whi = 512.0;
  bool ce_band = false;
  PVFlags ce_pv;
  add_common(*ce, ce_binder, ce_common);
  ce_binder.add_int(*ce, "--n", "n", ce_n, "dimension (2 or 3)")->required();
  ce_binder.add_double(*ce, "--beta", "beta", ce_beta, "a priori regularity")->required();
  ce_binder.add_double(*ce, "--eta-min", "eta.min", ce_eta_min, "sweep start");
  ce_binder.add_double(*ce, "--eta-max", "eta.max", ce_eta_max, "sweep end");
  ce_binder.add_int(*ce, "--points", "eta.points", ce_points, "sweep node count");
  ce_binder.add_double(*ce, "--window-lo", "window.lo", ce_wlo, "fit window start");
  ce_binder.add_double(*ce, "--window-hi", "window.hi", ce_whi, "fit window end");
  ce_binder.add_int(*ce, "--quad-order", "quad.order", ce_qorder, "reduced-rule panel order");
  ce_binder.add_int(*ce, "--quad-levels", "quad.levels", ce_qlevels, "reduced-rule grading depth");
  ce_binder.add_flag(*ce, "--band-diagnostic", "band.diagnostic", ce_band,
                     "also integrate over the equatorial band A(eta)");
  ce_pv.add(*ce, ce_binder);

  // born
  auto* born = app.add_subcommand("born", "truncated Born assembly and smoothing report");
  ConfigBinder born_binder;
  CommonOpts born_common;
  int born_n = 0, born_order = 2, born_points = 64, born_qorder = 12, born_qlevels = 14;
  double born_beta = 1.0, born_a = 1.0, born_c0 = 4.0;
  double born_eta_min = 4.0, born_eta_max = 1024.0, born_wlo = 9.0, born_whi = 512.0;
  std::string born_profile = "bessel";
  PVFlags born_pv;
  add_common(*born, born_binder, born_common);
  born_binder.add_int(*born, "--n", "n", born_n, "dimension (2 or 3)")->required();
  born_binder.add_double(*born, "--beta", "beta", born_beta, "a priori regularity");
  born_binder.add_int(*born, "--order", "order", born_order, "truncation order J (2 or 3)");
  born_binder.add_string(*born, "--profile", "profile.kind", born_profile,
                         "bessel | gaussian");
  born_binder.add_double(*born, "--a", "profile.a", born_a, "gaussian width parameter");
  born_binder.add_double(*born, "--c0", "cutoff.c0", born_c0, "cutoff frequency C0");
  born_binder.add_double(*born, "--eta-min", "eta.min", born_eta_min, "sweep start");
  born_binder.add_double(*born, "--eta-max", "eta.max", born_eta_max, "sweep end");
  born_binder.add_int(*born, "--points", "eta.points", born_points, "sweep node count");
  born_binder.add_double(*born, "--window-lo", "window.lo", born_wlo, "fit window start");
  born_binder.add_double(*born, "--window-hi", "window.hi", born_whi, "fit window end");
  born_binder.add_int(*born, "--quad-order", "quad.order", born_qorder,
                      "reduced-rule panel order");
  born_binder.add_int(*born, "--quad-levels", "quad.levels", born_qlevels,
                      "reduced-rule grading depth");
  born_pv.add(*born, born_binder);

  // verify
  auto* verify = app.add_subcommand("verify", "run the property suites");
  ConfigBinder verify_binder;
  CommonOpts verify_common;
  std::string verify_suite;
  bool verify_corrupt = false;
  add_common(*verify, verify_binder, verify_common);
  verify_binder.add_string(*verify, "--suite", "suite", verify_suite,
                           "run a single suite by name");
  verify_binder
      .add_flag(*verify, "--corrupt-quadrature", "corrupt.quadrature", verify_corrupt,
                "fault-injection hook: perturb sphere weights")
      ->group("");  // hidden test hook

  // decay-fit
  auto* decay = app.add_subcommand("decay-fit", "fit a power-law exponent to a profile CSV");
  std::string decay_input;
  double decay_lo = 8.0, decay_hi = 128.0;
  decay->add_option("--input", decay_input, "profile CSV (rho,re,im)")->required();
  decay->add_option("--rho-lo", decay_lo, "fit window start");
  decay->add_option("--rho-hi", decay_hi, "fit window end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (ce->parsed()) {
      finish_config(*ce, ce_binder, ce_common);
      return run_counterexample(ce_common, ce_binder, ce_n, ce_beta, ce_eta_min, ce_eta_max,
                                ce_points, ce_wlo, ce_whi, ce_pv, ce_qorder, ce_qlevels,
                                ce_band);
    }
    if (born->parsed()) {
      finish_config(*born, born_binder, born_common);
      return run_born(born_common, born_binder, born_n, born_beta, born_order, born_profile,
                      born_a, born_c0, born_eta_min, born_eta_max, born_points, born_wlo,
                      born_whi, born_pv, born_qorder, born_qlevels);
    }
    if (verify->parsed()) {
      finish_config(*verify, verify_binder, verify_common);
      return run_verify_cmd(verify_common, verify_binder, verify_suite, verify_corrupt);
    }
    if (decay->parsed()) return run_decay_fit(decay_input, decay_lo, decay_hi);
  } catch (const bs::NumericalDiagnostic& e) {
    std::fprintf(stderr, "numerical diagnostic: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
