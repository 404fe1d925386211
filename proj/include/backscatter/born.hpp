#pragma once

#include <optional>
#include <vector>

#include "backscatter/grid.hpp"
#include "backscatter/pv.hpp"

namespace backscatter {

// High-frequency cutoff chi: 0 below c0, 1 above 2 c0, quintic smoothstep
// ramp between (C^2 at the plateau joints, value 1/2 at 1.5 c0).
struct CutoffSpec {
  double c0 = 4.0;

  void validate() const;
};

double cutoff_chi(const CutoffSpec& spec, double xi_abs);

// Q2-hat(eta) = (i pi d + P) S_r(q)(eta).
Complex q2_hat(const RadialProfile& qhat, double eta_abs, const PVScheme& scheme,
               const ReducedRule& rule);
PVOutcome q2_hat_detailed(const RadialProfile& qhat, double eta_abs, const PVScheme& scheme,
                          const ReducedRule& rule);

struct Q3Options {
  SjQuadrature quad{};
  double eval_budget = 2e9;  // kernel-evaluation guard
  bool report_refinement = false;
};

// Q3-hat(eta) = prod_{i=1,2} (i pi d_i + P_i) S_{3,r}(q)(eta), realized as
// the tensor application of the PV functional nodes in (r_1, r_2).
Complex q3_hat(const RadialProfile& qhat, double eta_abs, int dim, const PVScheme& scheme,
               const Q3Options& options = {});

struct Q3Detailed {
  Complex value;
  double refinement_rel = 0.0;  // |refined - base| / |refined|
};
Q3Detailed q3_hat_detailed(const RadialProfile& qhat, double eta_abs, int dim,
                           const PVScheme& scheme, const Q3Options& options = {});

// chi q_B-hat = chi q-hat + sum_{j=2}^{J} chi Qj-hat over an eta grid.
struct BornResult {
  Grid1D eta_grid;
  std::vector<double> eta;
  std::vector<Complex> qhat;
  std::vector<Complex> q2hat;
  std::optional<std::vector<Complex>> q3hat;
  std::vector<Complex> qB_hat;
  std::vector<Complex> residual_hat;
  std::vector<char> masked;  // nodes whose PV evaluation raised a diagnostic
  int order = 2;
  CutoffSpec cutoff;
};

struct BornOptions {
  CutoffSpec cutoff{};
  PVScheme scheme{};
  int quad_order = 12;
  int quad_levels = 14;
  Q3Options q3{};
  int threads = 1;
};

BornResult born_approx(const RadialProfile& qhat, int J, int dim, const Grid1D& eta_grid,
                       const BornOptions& options);

// Polarization identity for the bilinear dispersion form:
// 2 B(f,g) = T(f+g) - T(f) - T(g) with T the diagonal. Returns the relative
// discrepancy.
double polarization_check(const RadialProfile& fhat, const RadialProfile& ghat, double eta_abs,
                          double r, const ReducedRule& rule);

}  // namespace backscatter
