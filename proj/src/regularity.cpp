#include "backscatter/regularity.hpp"

#include <cmath>
#include <stdexcept>

#include "backscatter/parallel.hpp"

namespace backscatter {

std::optional<double> BoundTable::teo_qj_alpha_sup(int j) const {
  if (j < 2) throw std::invalid_argument("teo_qj_alpha_sup: j >= 2 required");
  const double lo = 0.5 * (n - 3), hi = 0.5 * (n - 1);
  if (beta > lo && beta < hi) return beta + (j - 1) * (beta - lo);
  if (beta >= hi) return beta + (j - 1);
  return std::nullopt;
}

double BoundTable::alpha_j(int j) const {
  if (j < 2) throw std::invalid_argument("alpha_j: j >= 2 required");
  return beta + (j - 1) - 0.5 * n -
         0.5 * (n - 1) * (j - 2) * std::max(0.0, 0.5 - beta / n);
}

double BoundTable::counterexample_p() const {
  return std::min(beta + 0.5 * n + 1.0, 2.0 * beta + 2.0);
}

bool BoundTable::open_gap() const {
  return beta >= std::max(m_value, 0.0) && beta < 0.5 * (n - 1);
}

BoundTable bound_table(int n, double beta) {
  if (n < 2) throw std::invalid_argument("bound_table: n >= 2 required");
  if (!(beta >= 0.0)) throw std::invalid_argument("bound_table: beta >= 0 required");
  BoundTable t;
  t.n = n;
  t.beta = beta;
  t.m_value = 0.5 * (n - 4) + 2.0 / (n + 1);

  if (beta >= t.m_value && beta < 0.5 * (n - 2))
    t.teo_main1_alpha_max = 2.0 * beta - 0.5 * (n - 4);
  else if (beta >= 0.5 * (n - 2))
    t.teo_main1_alpha_max = beta + 1.0;

  if (beta > 0.5 * (n - 3) && beta < 0.5 * (n - 1))
    t.teo_main2_alpha_sup = 2.0 * beta - 0.5 * (n - 3);
  else if (beta >= 0.5 * (n - 1))
    t.teo_main2_alpha_sup = beta + 1.0;

  if (beta > 0.0) {
    if (beta < 0.5 * (n - 2))
      t.teo_q2count_alpha_max = 2.0 * beta - 0.5 * (n - 4);
    else
      t.teo_q2count_alpha_max = beta + 1.0;
  }
  return t;
}

CounterexampleReport counterexample_experiment(int n, double beta, const Grid1D& eta_grid,
                                               const CounterexampleOptions& options) {
  if (n != 2 && n != 3) throw std::invalid_argument("counterexample_experiment: n in {2,3}");
  if (!(beta > -0.5 * n))
    throw std::invalid_argument("counterexample_experiment: beta > -n/2 required");

  const BoundTable table = bound_table(n, std::max(beta, 0.0));
  // q_beta-hat = <.>^{-n/2-beta}; the lemma admits beta > -n/2, wider than
  // the bessel_power potential kind, so the profile is built directly.
  const double s = 0.5 * n + beta;
  const RadialProfile qb = RadialProfile::analytic(
      [s](double rho) -> Complex { return std::pow(1.0 + rho * rho, -0.5 * s); },
      [s](double rho) -> Complex {
        return -s * rho * std::pow(1.0 + rho * rho, -0.5 * s - 1.0);
      },
      /*real_valued=*/true);
  const ReducedRule rule = reduced_rule(n, options.quad_order, options.quad_levels);

  CounterexampleReport report;
  report.n = n;
  report.beta = beta;
  report.p = std::min(beta + 0.5 * n + 1.0, 2.0 * beta + 2.0);
  report.open_gap = table.open_gap();
  report.eta = eta_grid.nodes();

  const std::size_t count = report.eta.size();
  report.s_values.resize(count);
  if (options.with_q2) report.q2_values.resize(count);
  std::vector<double> band(options.band_diagnostic ? count : 0);

  parallel_for(count, options.threads, [&](std::size_t i) {
    const double eta = report.eta[i];
    report.s_values[i] = s_r(qb, eta, 1.0, rule).real();
    if (options.with_q2)
      report.q2_values[i] = apply_dispersion_pv(
          [&](double r) { return s_r(qb, eta, r, rule); }, options.scheme);
    if (options.band_diagnostic) {
      // Equatorial band A(eta): |t| <= 1/2 on Gamma_1(eta).
      const double R = 0.5 * eta;
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < rule.t.size(); ++k) {
        if (std::abs(rule.t[k]) > 0.5) continue;
        const double rho1 = 0.5 * eta * std::sqrt(2.0 + 2.0 * rule.t[k]);
        const double rho2 = 0.5 * eta * std::sqrt(2.0 - 2.0 * rule.t[k]);
        acc += rule.w[k] * qb.value(rho1) * qb.value(rho2);
      }
      band[i] = (std::pow(R, n - 1) * acc / eta).real();
    }
  });

  auto fit_of = [&](const std::vector<double>& vals) {
    std::vector<Complex> cv(vals.begin(), vals.end());
    return fit_decay(RadialProfile::sampled(report.eta, cv), options.window_lo,
                     options.window_hi);
  };
  report.s_fit = fit_of(report.s_values);
  if (options.with_q2) {
    std::vector<double> im(count);
    for (std::size_t i = 0; i < count; ++i) im[i] = report.q2_values[i].imag();
    report.im_q2_fit = fit_of(im);
  }
  if (options.band_diagnostic) report.band_fit = fit_of(band);

  report.margin = report.p - report.s_fit.exponent;
  report.pass_upper = report.s_fit.exponent <= report.p + options.tol_upper;
  report.pass_margin = report.margin <= options.tol_margin;
  return report;
}

Q2CountCheck q2count_check(int n, double beta, const CounterexampleReport& report) {
  if (!(beta > 0.0)) throw std::invalid_argument("q2count_check: beta > 0 required");
  if (!report.im_q2_fit)
    throw std::invalid_argument("q2count_check: report carries no Q2 sweep");
  Q2CountCheck check;
  const BoundTable table = bound_table(n, beta);
  check.ceiling = *table.teo_q2count_alpha_max;
  check.measured_ceiling = report.im_q2_fit->exponent - 0.5 * n;
  check.identity_gap = std::abs(report.im_q2_fit->exponent - report.s_fit.exponent);
  // pi S and S fit to the same slope; the ceiling check mirrors the
  // counterexample tolerances through Lemma-style bookkeeping.
  check.pass = check.identity_gap <= 1e-8 &&
               check.measured_ceiling <= check.ceiling + 0.1 &&
               check.ceiling - check.measured_ceiling <= 0.3;
  return check;
}

SmoothingEntry smoothing_check(const BornResult& result, double beta, int n, double window_lo,
                               double window_hi) {
  SmoothingEntry entry;
  entry.window_lo = window_lo;
  entry.window_hi = window_hi;
  const BoundTable table = bound_table(n, beta);
  entry.open_gap = table.open_gap();

  std::vector<double> keep_eta;
  std::vector<Complex> chi_q, res;
  for (std::size_t i = 0; i < result.eta.size(); ++i) {
    if (result.masked[i]) continue;  // masked nodes excluded from fits
    const double chi = cutoff_chi(result.cutoff, result.eta[i]);
    if (chi < 1.0) continue;  // report only where the cutoff is fully open
    keep_eta.push_back(result.eta[i]);
    chi_q.push_back(chi * result.qhat[i]);
    res.push_back(result.residual_hat[i]);
  }
  entry.e_q =
      fit_decay(RadialProfile::sampled(keep_eta, chi_q), window_lo, window_hi).exponent;
  entry.e_residual =
      fit_decay(RadialProfile::sampled(keep_eta, res), window_lo, window_hi).exponent;
  entry.gain = entry.e_residual - entry.e_q;

  const std::optional<double> sup = table.teo_qj_alpha_sup(2);
  if (sup) {
    entry.predicted_gain = *sup - beta;
    // Pre-asymptotic curvature biases fitted exponents down; require the
    // guaranteed gain up to an empirical slack (half above (n-1)/2, 60%
    // slack inside the gap region).
    const double factor = (beta >= 0.5 * (n - 1)) ? 0.5 : 0.4;
    entry.required_gain = factor * *entry.predicted_gain;
    entry.pass = entry.gain >= entry.required_gain;
  } else {
    entry.predicted_gain = std::nullopt;
    entry.required_gain = 0.0;
    entry.pass = true;  // no claim at this (n, beta)
  }
  return entry;
}

}  // namespace backscatter
