#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "backscatter/radial_profile.hpp"
#include "backscatter/sphere.hpp"

namespace backscatter {

// 1-D reduction of Ewald-sphere integrals for radial integrands: on
// Gamma_r(eta), |xi| = (|eta|/2) sqrt(1+r^2+2rt) and |eta-xi| =
// (|eta|/2) sqrt(1+r^2-2rt) with t = cos(psi). Nodes are Gauss-Legendre
// panels in psi, dyadically graded toward both poles so that the small-|xi|
// caps (angular width ~ 1/|eta|) stay resolved at every sweep frequency.
// Integral over S^{n-1}_R of g(t): R^{n-1} * sum w_i g(t_i).
struct ReducedRule {
  int dim = 2;
  int order = 12;
  int levels = 12;
  std::vector<double> t;
  std::vector<double> w;
};

ReducedRule reduced_rule(int dim, int order = 12, int levels = 12);

// S_r(q)(eta) = 2/(|eta|(1+r)) ∫_{Gamma_r(eta)} qhat(xi) qhat(eta-xi) dsigma.
Complex s_r(const RadialProfile& qhat, double eta_abs, double r, const ReducedRule& rule);

// Bilinear form underlying S_r; diagonal recovers s_r, symmetric under the
// xi -> eta - xi involution.
Complex bilinear_s_r(const RadialProfile& fhat, const RadialProfile& ghat, double eta_abs,
                     double r, const ReducedRule& rule);

// Majorant K_r(g1,g2)(eta) = |eta|^{-1} ∫ |g1(xi)| |g2(eta-xi)| dsigma.
double k_r(const RadialProfile& fhat, const RadialProfile& ghat, double eta_abs, double r,
           const ReducedRule& rule);

// d/dr of S_r: ((n-2)r+(n-1))/(r(1+r)^2) * (2/|eta|) ∫ qhat qhat dsigma
//            + 2/(1+r) ∫ theta.grad qhat(xi) qhat(eta-xi) dsigma,
// theta = (xi - eta/2)/|xi - eta/2|. Needs the derivative profile.
Complex ds_r(const RadialProfile& qhat, double eta_abs, double r, const ReducedRule& rule);

// Coefficient of the measure term in ds_r.
double ds_r_measure_coefficient(int dim, double r);

// Full-sphere path (no radial reduction), for cross-checking the fast one.
Complex s_r_spherical(const RadialProfile& qhat, double eta_abs, double r,
                      const SphereQuadrature& quad);

// Tensor angular orders for the multilinear operators.
struct SjQuadrature {
  int order_polar = 32;    // per sphere factor (equispaced angle for n=2, GL for n=3)
  int order_azimuth = 16;  // relative azimuth, n=3 only
};

// S_{j,r}(q)(eta) for j in {2,3}:
//   prod_i 2/(1+r_i) * |eta|^{1-j} ∫_{Gamma_r1 x ...} qhat(eta-xi_1)
//     prod qhat(xi_i - xi_{i+1}) qhat(xi_{j-1}) dsigma.
// j = 2 reproduces s_r through an independent (ungraded) rule. The type
// admits any j but evaluation beyond j = 3 is not provided (cost grows
// geometrically with j).
Complex s_j_r(const RadialProfile& qhat, double eta_abs, std::span<const double> r, int j,
              int dim, const SjQuadrature& quad = {});

// Number of kernel evaluations one s_j_r call costs, for budget guards.
double s_j_r_eval_cost(int j, int dim, const SjQuadrature& quad);

// One eta, a family of radii: S_r(q)(eta) sampled in r.
struct DispersionSample {
  double eta_abs = 0.0;
  std::vector<double> r_values;
  std::vector<Complex> values;
  std::optional<std::vector<Complex>> derivative_values;

  void validate() const;
};

DispersionSample sample_dispersion(const RadialProfile& qhat, double eta_abs,
                                   std::vector<double> r_values, const ReducedRule& rule,
                                   bool with_derivative = false);

}  // namespace backscatter
