#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "backscatter/dispersion.hpp"

namespace backscatter {

using Family = std::function<Complex(double)>;  // r -> F_r

enum class NearScheme { symmetric_reflection, taylor_subtraction };

// Configuration of the principal-value integrator for
// P(F) = p.v. ∫_0^inf F(r)/(1-r) dr. The window (1-delta, 1+delta) is
// handled singularity-free (reflection pairs or F(1)-subtraction); outside
// it composite Gauss-Legendre panels apply, geometrically graded away from
// r = 1 on the right. delta is fixed per scheme, not per eta.
struct PVScheme {
  double delta = 0.5;      // in (0,1)
  int panel_order = 16;    // >= 8
  double r_max = 257.0;    // > 1 + delta
  double tail_tol = 1e-6;  // relative truncation tolerance
  NearScheme near_scheme = NearScheme::symmetric_reflection;

  void validate() const;
};

// The scheme realized as evaluation nodes. Outer nodes carry the kernel
// 1/(1-r) in their weights; near nodes are the u-offsets from r = 1 with
// their base panel weights, applied per near_scheme.
struct PVRule {
  NearScheme scheme = NearScheme::symmetric_reflection;
  double delta = 0.5;
  double r_max = 257.0;
  std::vector<double> outer_nodes, outer_weights;
  std::vector<double> near_u, near_w;

  std::size_t eval_count() const { return outer_nodes.size() + 2 * near_u.size(); }
  // Collapsed linear functional (node, weight) pairs, the form composed in
  // the iterated multilinear operators.
  std::vector<std::pair<double, double>> linear_nodes() const;
};

PVRule make_pv_rule(const PVScheme& scheme, int refine = 1);

// Scheme-faithful application of P to a family.
Complex pv_apply(const PVRule& rule, const Family& family);

// d(F) = F(1).
Complex delta_part(const Family& family);

struct PVOutcome {
  Complex value;             // refined-rule result
  double error_estimate;     // |refined - base| self-convergence estimate
  double tail_bound;         // absolute truncation bound from the probes
  double scale;              // magnitude reference for relative checks
  double smoothness_ratio;   // second-difference ratio at r=1 (~4 for C^2)
  bool tail_ok = false;
  bool converged = false;
};

PVOutcome pv_part_detailed(const Family& family, const PVScheme& scheme);

// P(F). Throws TailTruncationError when the family has not decayed at
// r_max, ConvergenceFailure when panel refinement does not settle.
Complex pv_part(const Family& family, const PVScheme& scheme);

// (i pi d + P) F; for real families Re = P(F) and Im = pi F(1).
Complex apply_dispersion_pv(const Family& family, const PVScheme& scheme);
PVOutcome apply_dispersion_pv_detailed(const Family& family, const PVScheme& scheme);

// Same operator applied to a sampled dispersion family (values interpolated
// by the profile machinery would lose the r > r_max tail, so the sample must
// cover the rule's nodes; intended for precomputed sweeps).
Complex apply_dispersion_pv(const DispersionSample& sample, const PVScheme& scheme);

// Independent adaptive reference: symmetric-pair form
//   P(F) = ∫_0^1 (F(1-u) - F(1+u))/u du - ∫_1^{r_max-1} F(1+u)/u du,
// evaluated by adaptive Simpson to tol. Used as the oracle the fixed-panel
// scheme is checked against; shares no code path with PVRule.
Complex pv_reference(const Family& family, double tol = 1e-9, double r_max = 512.0);

}  // namespace backscatter
