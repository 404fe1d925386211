#pragma once

#include <optional>

#include "backscatter/born.hpp"
#include "backscatter/decay.hpp"

namespace backscatter {

// Theorem-derived thresholds at (n, beta). Fields are empty where the
// corresponding statement makes no claim.
struct BoundTable {
  int n = 2;
  double beta = 0.0;
  double m_value = 0.0;  // (n-4)/2 + 2/(n+1)

  // alpha <= 2 beta - (n-4)/2 on m <= beta < (n-2)/2, beta + 1 above.
  std::optional<double> teo_main1_alpha_max;
  // alpha < 2 beta - (n-3)/2 on (n-3)/2 < beta < (n-1)/2, beta + 1 above.
  std::optional<double> teo_main2_alpha_sup;
  // alpha <= 2 beta - (n-4)/2 on 0 <= beta < (n-2)/2, beta + 1 above
  // (needs beta > 0).
  std::optional<double> teo_q2count_alpha_max;

  // alpha < beta + (j-1)(beta - (n-3)/2) on (n-3)/2 < beta < (n-1)/2,
  // beta + (j-1) above.
  std::optional<double> teo_qj_alpha_sup(int j) const;
  // beta + (j-1) - n/2 - (n-1)/2 (j-2) max(0, 1/2 - beta/n).
  double alpha_j(int j) const;

  // Counterexample decay ceiling: p = min(beta + n/2 + 1, 2 beta + 2).
  double counterexample_p() const;

  bool open_gap() const;  // max(m,0) <= beta < (n-1)/2
};

BoundTable bound_table(int n, double beta);

struct CounterexampleOptions {
  PVScheme scheme{};
  int quad_order = 12;
  int quad_levels = 14;
  double window_lo = 8.0;
  double window_hi = 512.0;
  double tol_upper = 0.1;    // e <= p + tol_upper
  double tol_margin = 0.3;   // p - e <= tol_margin reported bound
  bool with_q2 = true;
  bool band_diagnostic = false;
  int threads = 1;
};

// Exponent sweep of S(q_beta) = s_1(q_beta) for the analytic profile
// q_beta-hat = <.>^{-n/2-beta}, against the lower-bound ceiling p.
struct CounterexampleReport {
  int n = 2;
  double beta = 0.0;
  double p = 0.0;
  std::vector<double> eta;
  std::vector<double> s_values;
  std::vector<Complex> q2_values;  // empty when with_q2 = false
  DecayFit s_fit;
  std::optional<DecayFit> im_q2_fit;
  std::optional<DecayFit> band_fit;  // equatorial band A(eta) restriction
  double margin = 0.0;               // p - fitted exponent
  bool pass_upper = false;
  bool pass_margin = false;
  bool open_gap = false;
};

CounterexampleReport counterexample_experiment(int n, double beta, const Grid1D& eta_grid,
                                               const CounterexampleOptions& options = {});

// Membership-ceiling consistency: the fitted Im Q2 exponent must match the
// S exponent (no cancellation) and stay consistent with
// alpha <= min(beta+1, 2 beta - (n-4)/2).
struct Q2CountCheck {
  double ceiling = 0.0;          // theorem row
  double measured_ceiling = 0.0; // fitted exponent - n/2
  double identity_gap = 0.0;     // |e(Im Q2) - e(S)|
  bool pass = false;
};

Q2CountCheck q2count_check(int n, double beta, const CounterexampleReport& report);

// Decay-exponent gain of the Born residual over chi q-hat, vs the j = 2
// theorem row. Flags a violation only when the measured gain undershoots the
// guaranteed range beyond tolerance; in the open gap the entry is
// informational.
struct SmoothingEntry {
  double e_q = 0.0;
  double e_residual = 0.0;
  double gain = 0.0;
  std::optional<double> predicted_gain;  // teo_qj(j=2) - beta
  double required_gain = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  bool pass = true;
  bool open_gap = false;
};

SmoothingEntry smoothing_check(const BornResult& result, double beta, int n, double window_lo,
                               double window_hi);

}  // namespace backscatter
