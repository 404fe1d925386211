#include "backscatter/born.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "backscatter/errors.hpp"
#include "backscatter/parallel.hpp"

namespace backscatter {

void CutoffSpec::validate() const {
  if (!(c0 > 0.0)) throw std::invalid_argument("CutoffSpec: c0 must be positive");
}

double cutoff_chi(const CutoffSpec& spec, double xi_abs) {
  spec.validate();
  if (!(xi_abs >= 0.0)) throw std::invalid_argument("cutoff_chi: xi_abs must be >= 0");
  if (xi_abs <= spec.c0) return 0.0;
  if (xi_abs >= 2.0 * spec.c0) return 1.0;
  const double s = (xi_abs - spec.c0) / spec.c0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

Complex q2_hat(const RadialProfile& qhat, double eta_abs, const PVScheme& scheme,
               const ReducedRule& rule) {
  return apply_dispersion_pv([&](double r) { return s_r(qhat, eta_abs, r, rule); }, scheme);
}

PVOutcome q2_hat_detailed(const RadialProfile& qhat, double eta_abs, const PVScheme& scheme,
                          const ReducedRule& rule) {
  return apply_dispersion_pv_detailed(
      [&](double r) { return s_r(qhat, eta_abs, r, rule); }, scheme);
}

namespace {

Complex q3_tensor(const RadialProfile& qhat, double eta_abs, int dim, const PVScheme& scheme,
                  const SjQuadrature& quad, int refine) {
  const PVRule rule = make_pv_rule(scheme, refine);
  std::vector<std::pair<double, Complex>> nodes;
  for (const auto& [r, w] : rule.linear_nodes()) nodes.emplace_back(r, Complex(w, 0.0));
  nodes.emplace_back(1.0, Complex(0.0, std::numbers::pi));

  // Inner functional in r_1 applied for each r_2 node, then the outer one;
  // with fixed nodes the cascade is the tensor sum.
  Complex acc{0.0, 0.0};
  for (const auto& [r2, c2] : nodes) {
    Complex inner{0.0, 0.0};
    for (const auto& [r1, c1] : nodes) {
      const double rr[2] = {r1, r2};
      inner += c1 * s_j_r(qhat, eta_abs, {rr, 2}, 3, dim, quad);
    }
    acc += c2 * inner;
  }
  return acc;
}

}  // namespace

Complex q3_hat(const RadialProfile& qhat, double eta_abs, int dim, const PVScheme& scheme,
               const Q3Options& options) {
  const PVRule rule = make_pv_rule(scheme, 1);
  const double node_count = static_cast<double>(rule.eval_count() + 1);
  const double cost = node_count * node_count * s_j_r_eval_cost(3, dim, options.quad);
  if (cost > options.eval_budget)
    throw CostBudgetExceeded("q3_hat: estimated " + std::to_string(cost) +
                             " kernel evaluations exceed the budget of " +
                             std::to_string(options.eval_budget));
  return q3_tensor(qhat, eta_abs, dim, scheme, options.quad, 1);
}

Q3Detailed q3_hat_detailed(const RadialProfile& qhat, double eta_abs, int dim,
                           const PVScheme& scheme, const Q3Options& options) {
  Q3Detailed out;
  const Complex base = q3_hat(qhat, eta_abs, dim, scheme, options);
  const Complex refined = q3_tensor(qhat, eta_abs, dim, scheme, options.quad, 2);
  out.value = refined;
  out.refinement_rel = std::abs(refined - base) / std::max(std::abs(refined), 1e-300);
  return out;
}

BornResult born_approx(const RadialProfile& qhat, int J, int dim, const Grid1D& eta_grid,
                       const BornOptions& options) {
  if (J != 2 && J != 3) throw std::invalid_argument("born_approx: J must be 2 or 3");
  options.cutoff.validate();
  options.scheme.validate();

  BornResult out;
  out.eta_grid = eta_grid;
  out.eta = eta_grid.nodes();
  out.order = J;
  out.cutoff = options.cutoff;
  const std::size_t n = out.eta.size();
  out.qhat.resize(n);
  out.q2hat.resize(n);
  if (J == 3) out.q3hat.emplace(n);
  out.qB_hat.resize(n);
  out.residual_hat.resize(n);
  out.masked.assign(n, 0);

  const ReducedRule rule = reduced_rule(dim, options.quad_order, options.quad_levels);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const double eta = out.eta[i];
    try {
      out.qhat[i] = qhat.value(eta);
      out.q2hat[i] = q2_hat(qhat, eta, options.scheme, rule);
      if (J == 3) (*out.q3hat)[i] = q3_hat(qhat, eta, dim, options.scheme, options.q3);
    } catch (const NumericalDiagnostic&) {
      out.masked[i] = 1;
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (out.masked[i]) continue;
    const double chi = cutoff_chi(options.cutoff, out.eta[i]);
    Complex sum_qj = chi * out.q2hat[i];
    if (J == 3) sum_qj += chi * (*out.q3hat)[i];
    out.qB_hat[i] = chi * out.qhat[i] + sum_qj;
    out.residual_hat[i] = -sum_qj;  // chi q-hat - qB-hat
  }
  return out;
}

double polarization_check(const RadialProfile& fhat, const RadialProfile& ghat, double eta_abs,
                          double r, const ReducedRule& rule) {
  const Complex lhs = 2.0 * bilinear_s_r(fhat, ghat, eta_abs, r, rule);
  const Complex tf = s_r(fhat, eta_abs, r, rule);
  const Complex tg = s_r(ghat, eta_abs, r, rule);
  const Complex tfg = s_r(fhat + ghat, eta_abs, r, rule);
  const Complex rhs = tfg - tf - tg;
  const double scale = std::max({std::abs(lhs), std::abs(tf), std::abs(tg), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace backscatter
