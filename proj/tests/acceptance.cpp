// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances in code; oracle values come from closed
// forms or from the independent reference integrators.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "backscatter/born.hpp"
#include "backscatter/field.hpp"
#include "backscatter/potentials.hpp"
#include "backscatter/regularity.hpp"
#include "backscatter/verify.hpp"
#include "test_support.hpp"

using namespace backscatter;
using testsupport::gauss_ds_r_closed;
using testsupport::gauss_s_r_closed;
using testsupport::kPi;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double timed(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Gaussian dispersion oracle, |s_r - closed|/closed < 1e-8.
void criterion_1() {
  double worst = 0.0;
  for (int dim : {2, 3}) {
    const ReducedRule rule = reduced_rule(dim);
    const RadialProfile q = gaussian_spectrum(1.0);
    for (double r : {0.5, 1.0, 2.0})
      for (double eta : {1.0, 2.0, 8.0}) {
        const double got = s_r(q, eta, r, rule).real();
        const double want = gauss_s_r_closed(dim, 1.0, eta, r);
        worst = std::max(worst, std::abs(got - want) / want);
      }
  }
  report(1, "Gaussian dispersion oracle", worst < 1e-8,
         "worst rel " + std::to_string(worst) + ", tol 1e-8");
}

// 2. ds_r against the differentiated closed form + O(h^2) Richardson.
void criterion_2() {
  double worst = 0.0;
  for (int dim : {2, 3}) {
    const ReducedRule rule = reduced_rule(dim);
    const RadialProfile q = gaussian_spectrum(1.0);
    for (double r : {0.5, 1.0, 2.0})
      for (double eta : {1.0, 2.0, 8.0}) {
        const double got = ds_r(q, eta, r, rule).real();
        const double want = gauss_ds_r_closed(dim, 1.0, eta, r);
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
      }
  }
  bool richardson = true;
  double ratio_logged = 0.0;
  for (int dim : {2, 3}) {
    const ReducedRule rule = reduced_rule(dim);
    const RadialProfile q = gaussian_spectrum(1.0);
    const double eta = 2.0, r = 1.0;
    const Complex d = ds_r(q, eta, r, rule);
    const auto fd = [&](double h) {
      return std::abs((s_r(q, eta, r + h, rule) - s_r(q, eta, r - h, rule)) / (2.0 * h) - d);
    };
    const double ratio = fd(1e-3) / fd(5e-4);
    ratio_logged = ratio;
    if (ratio < 3.2 || ratio > 4.8) richardson = false;
  }
  report(2, "d/dr dispersion oracle", worst < 1e-8 && richardson,
         "worst rel " + std::to_string(worst) + ", tol 1e-8; Richardson ratio " +
             std::to_string(ratio_logged) + " in [3.2, 4.8]");
}

// 3. PV oracle: scheme vs adaptive symmetric-pair reference, 1e-6, both
// near-singularity schemes, three families.
void criterion_3() {
  double worst = 0.0;
  bool pass = true;
  const auto check = [&](const Family& family, double exact_zero) {
    const Complex ref = pv_reference(family, 1e-9);
    for (NearScheme near :
         {NearScheme::symmetric_reflection, NearScheme::taylor_subtraction}) {
      PVScheme scheme;
      scheme.near_scheme = near;
      const Complex got = pv_part(family, scheme);
      if (exact_zero > 0.0) {
        pass = pass && std::abs(got) < 1e-12 && std::abs(ref) < 1e-9;
      } else {
        const double rel = std::abs(got - ref) / std::abs(ref);
        worst = std::max(worst, rel);
        pass = pass && rel < 1e-6;
      }
    }
  };
  check([](double r) { return Complex((1.0 - r) * std::exp(-r), 0.0); }, 0.0);
  check([](double r) { return Complex(r < 2.0 ? 1.0 : 0.0, 0.0); }, 1.0);
  check([](double r) { return Complex(gauss_s_r_closed(2, 1.0, 2.0, r), 0.0); }, 0.0);
  report(3, "PV oracle vs adaptive reference", pass,
         "worst rel " + std::to_string(worst) + ", tol 1e-6, both near schemes");
}

// 4. g_beta spectra: exponent n/2+beta within +-0.05 on [8,128], spectrum
// >= -1e-10 max.
void criterion_4() {
  struct Case {
    int n;
    double beta;
    double half_extent;
    int points;
    double scale;
  };
  const std::vector<Case> cases = {
      {2, 1.0, 4.0, 512, 1.0}, {3, 0.5, 1.25, 128, 0.625}, {3, 1.5, 2.0, 192, 1.0}};
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    const CartesianGrid grid(c.n, c.half_extent, c.points);
    const GBetaResult r = make_g_beta(c.beta, c.scale, grid);
    const DecayFit fit = fit_decay(radial_average(r.ghat), 8.0, 128.0);
    const double target = 0.5 * c.n + c.beta;
    double mn = 0.0, mx = 0.0;
    for (const Complex& v : r.ghat.samples) {
      mn = std::min(mn, v.real());
      mx = std::max(mx, v.real());
    }
    const bool ok = std::abs(fit.exponent - target) <= 0.05 && mn >= -1e-10 * mx;
    pass = pass && ok;
    detail += "(" + std::to_string(c.n) + "," + std::to_string(c.beta).substr(0, 3) +
              "): e=" + std::to_string(fit.exponent) + " ";
  }
  report(4, "g_beta spectral exponents", pass, detail + "tol +-0.05, window [8,128]");
}

// 5. Counterexample exponents: e <= p + 0.1 and margin p - e <= 0.3.
void criterion_5() {
  struct Case {
    int n;
    double beta;
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : {Case{2, 1.0}, Case{3, 0.5}, Case{3, 1.0}}) {
    CounterexampleOptions opts;
    opts.with_q2 = false;
    opts.window_lo = 8.0;
    opts.window_hi = 512.0;
    opts.threads = 2;
    const Grid1D grid(4.0, 1024.0, 64, Spacing::logarithmic);
    const CounterexampleReport r = counterexample_experiment(c.n, c.beta, grid, opts);
    pass = pass && r.pass_upper && r.pass_margin;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%d,%g): p=%g e=%.3f margin=%+.3f ", c.n, c.beta, r.p,
                  r.s_fit.exponent, r.margin);
    detail += buf;
  }
  report(5, "counterexample exponents", pass, detail + "e<=p+0.1, p-e<=0.3");
}

// 6. Q2 structure: Im q2 = pi s_1 nodewise to 1e-10; multilinearity
// lambda^j to 1e-12 for j in {2,3}.
void criterion_6() {
  bool pass = true;
  double worst_imag = 0.0, worst_scale = 0.0;
  const PVScheme scheme;
  for (int dim : {2, 3}) {
    const double beta = dim == 2 ? 1.0 : 1.0;
    const RadialProfile q = bessel_spectrum(beta, dim);
    const ReducedRule rule = reduced_rule(dim);
    for (double eta : {4.0, 16.0, 64.0}) {
      const Complex v = q2_hat(q, eta, scheme, rule);
      const double s1 = s_r(q, eta, 1.0, rule).real();
      worst_imag = std::max(worst_imag, std::abs(v.imag() - kPi * s1) / (kPi * s1));
      const Complex base2 = v;
      for (double lambda : {0.5, 2.0}) {
        const Complex scaled = q2_hat(lambda * q, eta, scheme, rule);
        worst_scale = std::max(
            worst_scale, std::abs(scaled - lambda * lambda * base2) / std::abs(scaled));
      }
    }
  }
  {
    PVScheme cheap;
    cheap.panel_order = 8;
    cheap.r_max = 17.0;
    Q3Options opt;
    opt.quad.order_polar = 16;
    const RadialProfile q = gaussian_spectrum(1.0);
    const Complex base = q3_hat(q, 2.0, 2, cheap, opt);
    for (double lambda : {0.5, 2.0}) {
      const Complex scaled = q3_hat(lambda * q, 2.0, 2, cheap, opt);
      worst_scale = std::max(worst_scale,
                             std::abs(scaled - std::pow(lambda, 3) * base) / std::abs(scaled));
    }
  }
  pass = worst_imag < 1e-10 && worst_scale < 1e-12;
  report(6, "Q2 structure and multilinearity", pass,
         "worst Im-vs-pi*s1 " + std::to_string(worst_imag) + " (tol 1e-10), scaling " +
             std::to_string(worst_scale) + " (tol 1e-12)");
}

// 7. Smoothing: residual exponent exceeds chi q-hat exponent by >= 0.5 at
// n=2, beta=1, J=2.
void criterion_7() {
  BornOptions opts;
  opts.threads = 2;
  const Grid1D grid(4.0, 1024.0, 64, Spacing::logarithmic);
  const BornResult res = born_approx(bessel_spectrum(1.0, 2), 2, 2, grid, opts);
  const SmoothingEntry entry = smoothing_check(res, 1.0, 2, 9.0, 512.0);
  report(7, "recovery-of-singularities smoothing", entry.pass && entry.gain >= 0.5,
         "gain " + std::to_string(entry.gain) + " (e_q " + std::to_string(entry.e_q) +
             ", e_res " + std::to_string(entry.e_residual) + "), required >= 0.5");
}

// 8. Property suites, zero failures.
void criterion_8() {
  verify::VerifyOptions opts;
  opts.threads = 2;
  const auto results = verify::run_verify(opts);
  bool pass = verify::all_passed(results);
  std::string detail;
  for (const auto& r : results)
    detail += r.name + (r.passed() ? " ok; " : " FAILED(" + std::to_string(r.failures) + "); ");
  report(8, "property suites", pass, detail);
}

// 9. Bound-table anchors, exact.
void criterion_9() {
  const bool m_ok = bound_table(4, 1.0).m_value == 0.4;
  const bool q2c_ok = *bound_table(4, 0.5).teo_q2count_alpha_max == 1.0;
  bool cap_ok = true;
  for (double beta : {0.5, 1.0, 3.0})
    cap_ok = cap_ok && (*bound_table(2, beta).teo_main2_alpha_sup - beta == 1.0);
  report(9, "bound-table anchors", m_ok && q2c_ok && cap_ok,
         std::string("m(4)=2/5 ") + (m_ok ? "ok" : "BAD") + ", ceiling(4,0.5)=1 " +
             (q2c_ok ? "ok" : "BAD") + ", n=2 gain cap 1 " + (cap_ok ? "ok" : "BAD"));
}

}  // namespace

int main() {
  const double total = timed([] {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
  });
  std::printf("%d/9 criteria passed in %.1f s\n", 9 - failures, total);
  return failures == 0 ? 0 : 1;
}
