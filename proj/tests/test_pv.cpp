#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "backscatter/errors.hpp"
#include "backscatter/pv.hpp"
#include "test_support.hpp"

using namespace backscatter;
using testsupport::gauss_s_r_closed;
using testsupport::kPi;

namespace {

const Family cancel_family = [](double r) { return Complex((1.0 - r) * std::exp(-r), 0.0); };
const Family step_family = [](double r) { return Complex(r < 2.0 ? 1.0 : 0.0, 0.0); };
const Family gauss_family = [](double r) {
  return Complex(gauss_s_r_closed(2, 1.0, 2.0, r), 0.0);
};

PVScheme scheme_with(NearScheme near) {
  PVScheme s;
  s.near_scheme = near;
  return s;
}

}  // namespace

TEST_CASE("scheme validation") {
  PVScheme s;
  s.delta = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.delta = 0.5;
  s.panel_order = 4;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.panel_order = 16;
  s.r_max = 1.2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("delta part evaluates at r = 1") {
  CHECK(delta_part(cancel_family) == Complex(0.0, 0.0));
  CHECK(delta_part([](double r) { return Complex(std::exp(-r), 0.0); }).real() ==
        doctest::Approx(std::exp(-1.0)));
  CHECK(delta_part(gauss_family).real() == doctest::Approx(kPi * std::exp(-4.0)));
}

TEST_CASE("pv_part: exactly solvable families") {
  for (NearScheme near : {NearScheme::symmetric_reflection, NearScheme::taylor_subtraction}) {
    const PVScheme scheme = scheme_with(near);
    // (1-r)e^{-r}: the kernel cancels, P = int_0^inf e^{-r} dr = 1.
    CHECK(std::abs(pv_part(cancel_family, scheme).real() - 1.0) < 1e-12);
    // Indicator of (0,2): odd kernel on a symmetric interval, P = 0.
    CHECK(std::abs(pv_part(step_family, scheme).real()) < 1e-12);
  }
}

TEST_CASE("pv_part agrees with the adaptive symmetric-pair reference") {
  const Complex ref = pv_reference(gauss_family, 1e-9);
  for (NearScheme near : {NearScheme::symmetric_reflection, NearScheme::taylor_subtraction}) {
    const Complex got = pv_part(gauss_family, scheme_with(near));
    CHECK(std::abs(got - ref) / std::abs(ref) < 1e-6);
  }
}

TEST_CASE("linearity of (i pi d + P)") {
  const PVScheme scheme;
  const Family f = cancel_family;
  const Family g = [](double r) { return Complex(std::exp(-0.5 * r * r), std::exp(-r)); };
  const Complex af = apply_dispersion_pv(f, scheme);
  const Complex ag = apply_dispersion_pv(g, scheme);
  const Complex combined = apply_dispersion_pv(
      [&](double r) { return 1.5 * f(r) + Complex(0.0, 2.0) * g(r); }, scheme);
  const Complex want = 1.5 * af + Complex(0.0, 2.0) * ag;
  CHECK(std::abs(combined - want) / std::abs(want) < 1e-12);
}

TEST_CASE("even part of the family contributes nothing near the singularity") {
  // F even in (1-r): local near-window contribution is exactly zero for the
  // reflection scheme and cancels to rounding for the subtraction scheme.
  const Family even = [](double r) {
    const double u = 1.0 - r;
    return Complex(std::exp(-u * u), 0.0);
  };
  for (NearScheme near : {NearScheme::symmetric_reflection, NearScheme::taylor_subtraction}) {
    const PVRule rule = make_pv_rule(scheme_with(near));
    Complex near_acc{0.0, 0.0};
    if (near == NearScheme::symmetric_reflection) {
      for (std::size_t i = 0; i < rule.near_u.size(); ++i)
        near_acc += rule.near_w[i] / rule.near_u[i] *
                    (even(1.0 - rule.near_u[i]) - even(1.0 + rule.near_u[i]));
    } else {
      const Complex f1 = even(1.0);
      for (std::size_t i = 0; i < rule.near_u.size(); ++i) {
        near_acc += rule.near_w[i] / rule.near_u[i] * (even(1.0 - rule.near_u[i]) - f1);
        near_acc -= rule.near_w[i] / rule.near_u[i] * (even(1.0 + rule.near_u[i]) - f1);
      }
    }
    CHECK(std::abs(near_acc) < 1e-14);
  }
}

TEST_CASE("panel refinement converges at fourth order or better") {
  // A family with a feature scale small enough that panel order 8 is not
  // exact, so halving panel width shows a measurable error drop.
  const Family wiggly = [](double r) {
    return Complex(std::exp(-r) * std::cos(9.0 * r) / (1.0 + r * r), 0.0);
  };
  PVScheme scheme;
  scheme.panel_order = 8;
  const Complex ref = pv_reference(wiggly, 1e-11);
  const Complex coarse = pv_apply(make_pv_rule(scheme, 1), wiggly);
  const Complex fine = pv_apply(make_pv_rule(scheme, 2), wiggly);
  const double e1 = std::abs(coarse - ref);
  const double e2 = std::abs(fine - ref);
  CHECK(e2 > 0.0);
  CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("positive family supported in (0,1) has positive principal value") {
  const Family inside = [](double r) {
    if (r <= 0.0 || r >= 1.0) return Complex(0.0, 0.0);
    const double s = std::sin(kPi * r);
    return Complex(s * s, 0.0);
  };
  for (NearScheme near : {NearScheme::symmetric_reflection, NearScheme::taylor_subtraction})
    CHECK(pv_part(inside, scheme_with(near)).real() > 0.0);
}

TEST_CASE("tail diagnostics") {
  SUBCASE("undecayed family raises a truncation error") {
    const Family constant = [](double r) { return Complex(1.0 / (1.0 + 0.001 * r), 0.0); };
    CHECK_THROWS_AS(pv_part(constant, PVScheme{}), TailTruncationError);
  }
  SUBCASE("power-law tails pass when fast enough") {
    const Family powtail = [](double r) { return Complex(std::pow(1.0 + r * r, -2.0), 0.0); };
    CHECK_NOTHROW(pv_part(powtail, PVScheme{}));
    const PVOutcome outcome = pv_part_detailed(powtail, PVScheme{});
    CHECK(outcome.tail_ok);
    CHECK(outcome.tail_bound > 0.0);
  }
}

TEST_CASE("smoothness diagnostic and convergence failure") {
  SUBCASE("kinked family reports a non-quadratic second-difference ratio") {
    const Family kink = [](double r) {
      return Complex(r < 1.0 ? std::exp(2.0 * (r - 1.0)) : std::exp(-(r - 1.0)), 0.0);
    };
    const PVOutcome outcome = pv_part_detailed(kink, PVScheme{});
    CHECK(std::abs(outcome.smoothness_ratio - 4.0) > 1.0);  // ~2 for a C^0 kink
  }
  SUBCASE("corner inside a near panel trips the convergence gate") {
    const Family corner = [](double r) {
      return Complex(std::abs(1.2 - r) * std::exp(-r), 0.0);
    };
    const PVOutcome outcome = pv_part_detailed(corner, PVScheme{});
    CHECK_FALSE(outcome.converged);
    CHECK_THROWS_AS(pv_part(corner, PVScheme{}), ConvergenceFailure);
  }
}

TEST_CASE("apply_dispersion_pv structure") {
  SUBCASE("real family: Im = pi F(1) exactly") {
    const Complex v = apply_dispersion_pv(gauss_family, PVScheme{});
    CHECK(v.imag() == doctest::Approx(kPi * gauss_family(1.0).real()).epsilon(1e-14));
    CHECK(v.real() == doctest::Approx(pv_part(gauss_family, PVScheme{}).real()));
  }
  SUBCASE("cancel-exactly family combines to 1") {
    const Complex v = apply_dispersion_pv(cancel_family, PVScheme{});
    CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("sampled dispersion family path") {
  PVScheme scheme;
  scheme.r_max = 17.0;  // keep the sampled window small
  std::vector<double> rs;
  std::vector<Complex> vals;
  for (double r = 1e-4; r <= 4.0 * scheme.r_max + 1.0; r *= 1.01) {
    rs.push_back(r);
    vals.push_back(gauss_family(r));
  }
  const DispersionSample sample{2.0, rs, vals, std::nullopt};
  const Complex via_sample = apply_dispersion_pv(sample, scheme);
  const Complex direct = apply_dispersion_pv(gauss_family, scheme);
  CHECK(std::abs(via_sample - direct) / std::abs(direct) < 1e-6);
}
