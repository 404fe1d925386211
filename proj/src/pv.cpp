#include "backscatter/pv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "backscatter/errors.hpp"
#include "backscatter/quadrature.hpp"

namespace backscatter {

namespace {

double cabs(const Complex& z) { return std::abs(z); }

// Adaptive Simpson with absolute tolerance budget.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b, Complex fa,
                         Complex fm, Complex fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Complex flm = f(lm), frm = f(rm);
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex delta = left + right - whole;
  if (depth <= 0 || cabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                           double tol) {
  const Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 48);
}

}  // namespace

void PVScheme::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("PVScheme: delta in (0,1)");
  if (panel_order < 8) throw std::invalid_argument("PVScheme: panel_order >= 8");
  if (!(r_max > 1.0 + delta) || !std::isfinite(r_max))
    throw std::invalid_argument("PVScheme: r_max must be finite and > 1 + delta");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("PVScheme: tail_tol must be positive");
}

PVRule make_pv_rule(const PVScheme& scheme, int refine) {
  scheme.validate();
  if (refine < 1) throw std::invalid_argument("make_pv_rule: refine >= 1");
  const GaussRule& gl = gauss_legendre(scheme.panel_order);
  PVRule rule;
  rule.scheme = scheme.near_scheme;
  rule.delta = scheme.delta;
  rule.r_max = scheme.r_max;

  // [0, 1-delta]: equal panels of width <= 0.25, kernel folded into weights.
  {
    const double len = 1.0 - scheme.delta;
    const int panels = std::max(1, static_cast<int>(std::ceil(len / 0.25))) * refine;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p)
      append_panel(gl, len * p / panels, len * (p + 1) / panels, nodes, weights);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      rule.outer_nodes.push_back(nodes[i]);
      rule.outer_weights.push_back(weights[i] / (1.0 - nodes[i]));
    }
  }

  // Near window in u = |1 - r| over (0, delta]: equal panels.
  {
    const int panels = 2 * refine;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p)
      append_panel(gl, scheme.delta * p / panels, scheme.delta * (p + 1) / panels, nodes,
                   weights);
    rule.near_u = std::move(nodes);
    rule.near_w = std::move(weights);
  }

  // [1+delta, r_max]: breakpoints 1 + delta 2^k, matching the scale on which
  // the integrand varies; each geometric piece split refine-fold.
  {
    std::vector<double> bp{1.0 + scheme.delta};
    while (bp.back() < scheme.r_max)
      bp.push_back(std::min(1.0 + 2.0 * (bp.back() - 1.0), scheme.r_max));
    std::vector<double> nodes, weights;
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
      for (int p = 0; p < refine; ++p) {
        const double a = bp[s] + (bp[s + 1] - bp[s]) * p / refine;
        const double b = bp[s] + (bp[s + 1] - bp[s]) * (p + 1) / refine;
        append_panel(gl, a, b, nodes, weights);
      }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      rule.outer_nodes.push_back(nodes[i]);
      rule.outer_weights.push_back(weights[i] / (1.0 - nodes[i]));
    }
  }
  return rule;
}

std::vector<std::pair<double, double>> PVRule::linear_nodes() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(eval_count());
  for (std::size_t i = 0; i < outer_nodes.size(); ++i)
    out.emplace_back(outer_nodes[i], outer_weights[i]);
  for (std::size_t i = 0; i < near_u.size(); ++i) {
    const double c = near_w[i] / near_u[i];
    out.emplace_back(1.0 - near_u[i], c);
    out.emplace_back(1.0 + near_u[i], -c);
  }
  return out;
}

Complex pv_apply(const PVRule& rule, const Family& family) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.outer_nodes.size(); ++i)
    acc += rule.outer_weights[i] * family(rule.outer_nodes[i]);
  if (rule.scheme == NearScheme::symmetric_reflection) {
    for (std::size_t i = 0; i < rule.near_u.size(); ++i) {
      const double u = rule.near_u[i];
      acc += rule.near_w[i] / u * (family(1.0 - u) - family(1.0 + u));
    }
  } else {
    const Complex f1 = family(1.0);
    for (std::size_t i = 0; i < rule.near_u.size(); ++i) {
      const double u = rule.near_u[i];
      acc += rule.near_w[i] / u * (family(1.0 - u) - f1);
      acc -= rule.near_w[i] / u * (family(1.0 + u) - f1);
    }
  }
  return acc;
}

Complex delta_part(const Family& family) { return family(1.0); }

namespace {

struct TailProbe {
  double bound = 0.0;
  bool decayed = false;
  double largest = 0.0;
};

TailProbe probe_tail(const Family& family, const PVScheme& scheme) {
  TailProbe out;
  const double r0 = scheme.r_max;
  const double f0 = cabs(family(r0));
  const double f1 = cabs(family(2.0 * r0));
  const double f2 = cabs(family(4.0 * r0));
  out.largest = std::max({f0, f1, f2});
  if (out.largest == 0.0) {
    out.decayed = true;
    out.bound = 0.0;
    return out;
  }
  // Decay slope across the probes; require clear decrease.
  const double ratio = std::max(f1 / std::max(f0, 1e-300), f2 / std::max(f1, 1e-300));
  const double p = -std::log2(std::min(1.0, ratio));
  if (p <= 0.1) {
    out.decayed = false;
    out.bound = out.largest;  // no usable bound
    return out;
  }
  out.decayed = true;
  // ∫_{r0}^{4 r0} |F|/|r-1| <= largest * log((4r0-1)/(r0-1)); beyond 4 r0
  // extrapolate |F| ~ f2 (4r0/r)^p:
  // ∫_A^inf (A/r)^p/(r-1) dr <= (A/(A-1))/p with A = 4 r0.
  const double mass_near = std::log((4.0 * r0 - 1.0) / (r0 - 1.0));
  const double A = 4.0 * r0;
  out.bound = out.largest * mass_near + f2 * (A / (A - 1.0)) / p;
  return out;
}

double second_difference_ratio(const Family& family, double delta) {
  const Complex f1 = family(1.0);
  const double h = delta / 8.0;
  const Complex d2a = family(1.0 + h) - 2.0 * f1 + family(1.0 - h);
  const Complex d2b = family(1.0 + 0.5 * h) - 2.0 * f1 + family(1.0 - 0.5 * h);
  const double floor = 1e-10 * cabs(f1) + 1e-300;
  if (cabs(d2a) < floor || cabs(d2b) < floor) return 4.0;  // flat: treat as smooth
  return cabs(d2a) / cabs(d2b);
}

}  // namespace

PVOutcome pv_part_detailed(const Family& family, const PVScheme& scheme) {
  scheme.validate();
  PVOutcome out;
  const Complex base = pv_apply(make_pv_rule(scheme, 1), family);
  const Complex refined = pv_apply(make_pv_rule(scheme, 2), family);
  out.value = refined;
  out.error_estimate = cabs(refined - base);
  const TailProbe tail = probe_tail(family, scheme);
  out.tail_bound = tail.bound;
  out.smoothness_ratio = second_difference_ratio(family, scheme.delta);
  out.scale =
      std::max({cabs(refined), cabs(family(1.0)), tail.largest, 1e-300});
  out.tail_ok = tail.decayed && tail.bound <= scheme.tail_tol * (out.scale + tail.bound);
  out.converged = out.error_estimate <= 1e-6 * out.scale;
  return out;
}

Complex pv_part(const Family& family, const PVScheme& scheme) {
  const PVOutcome out = pv_part_detailed(family, scheme);
  if (!out.tail_ok)
    throw TailTruncationError("pv_part: family not decayed at r_max (tail bound " +
                              std::to_string(out.tail_bound) + ")");
  if (!out.converged)
    throw ConvergenceFailure("pv_part: panel refinement did not settle (estimate " +
                             std::to_string(out.error_estimate) + ", smoothness ratio " +
                             std::to_string(out.smoothness_ratio) + ")");
  return out.value;
}

Complex apply_dispersion_pv(const Family& family, const PVScheme& scheme) {
  const Complex p = pv_part(family, scheme);
  return p + Complex(0.0, std::numbers::pi) * delta_part(family);
}

PVOutcome apply_dispersion_pv_detailed(const Family& family, const PVScheme& scheme) {
  PVOutcome out = pv_part_detailed(family, scheme);
  out.value += Complex(0.0, std::numbers::pi) * delta_part(family);
  return out;
}

Complex apply_dispersion_pv(const DispersionSample& sample, const PVScheme& scheme) {
  sample.validate();
  // The first panel node sits near 1.3e-3 * (1 - delta); below the first
  // sample the interpolant clamps, so the sample only has to start below
  // that and cover the tail probes at 4 r_max.
  if (sample.r_values.front() > 1e-2 || sample.r_values.back() < 4.0 * scheme.r_max)
    throw std::invalid_argument(
        "apply_dispersion_pv: sample must cover (0, 4*r_max] including tail probes");
  const RadialProfile interp = RadialProfile::sampled(sample.r_values, sample.values);
  return apply_dispersion_pv([&](double r) { return interp.value(r); }, scheme);
}

Complex pv_reference(const Family& family, double tol, double r_max) {
  const double scale =
      std::max({cabs(family(0.5)), cabs(family(1.0)), cabs(family(2.0)), 1e-300});
  const double abs_tol = tol * scale;
  // Symmetric-pair integrand on (0, 1]; continuous at 0 with value -2 F'(1).
  const auto h = [&](double u) { return (family(1.0 - u) - family(1.0 + u)) / u; };
  const double u0 = 1e-3;
  // [0, u0] by fixed Gauss-Legendre: nodes stay far enough from 0 that the
  // difference quotient is well conditioned.
  Complex head{0.0, 0.0};
  {
    const GaussRule& gl = gauss_legendre(24);
    std::vector<double> nodes, weights;
    append_panel(gl, 0.0, u0, nodes, weights);
    for (std::size_t i = 0; i < nodes.size(); ++i) head += weights[i] * h(nodes[i]);
  }
  const Complex mid = integrate_adaptive(h, u0, 1.0, abs_tol * 0.25);
  // Tail - ∫_1^{r_max-1} F(1+u)/u du on geometric segments.
  Complex tail{0.0, 0.0};
  double a = 1.0;
  while (a < r_max - 1.0) {
    const double b = std::min(2.0 * a, r_max - 1.0);
    tail +=
        integrate_adaptive([&](double u) { return family(1.0 + u) / u; }, a, b, abs_tol * 0.05);
    a = b;
  }
  return head + mid - tail;
}

}  // namespace backscatter
