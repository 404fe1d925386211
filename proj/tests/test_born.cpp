#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "backscatter/born.hpp"
#include "backscatter/decay.hpp"
#include "backscatter/errors.hpp"
#include "backscatter/potentials.hpp"
#include "test_support.hpp"

using namespace backscatter;
using testsupport::kPi;

TEST_CASE("cutoff chi") {
  const CutoffSpec spec{.c0 = 4.0};
  CHECK(cutoff_chi(spec, 2.0) == 0.0);
  CHECK(cutoff_chi(spec, 4.0) == 0.0);
  CHECK(cutoff_chi(spec, 12.0) == 1.0);
  CHECK(cutoff_chi(spec, 8.0) == 1.0);
  CHECK(cutoff_chi(spec, 6.0) == doctest::Approx(0.5));
  // Monotone, C1 at the joints (difference quotients shrink).
  double prev = 0.0;
  for (double x = 3.9; x < 8.2; x += 0.01) {
    const double v = cutoff_chi(spec, x);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  const double h = 1e-6;
  CHECK(std::abs(cutoff_chi(spec, 4.0 + h) - cutoff_chi(spec, 4.0)) / h < 1e-4);
  CHECK(std::abs(cutoff_chi(spec, 8.0) - cutoff_chi(spec, 8.0 - h)) / h < 1e-4);
  CHECK_THROWS_AS(cutoff_chi(CutoffSpec{.c0 = -1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("q2_hat structure for the Gaussian") {
  const RadialProfile q = gaussian_spectrum(1.0);
  const ReducedRule rule = reduced_rule(2);
  const PVScheme scheme;
  const Complex v = q2_hat(q, 2.0, scheme, rule);
  // Im Q2 = pi s_1 = pi^2 e^{-4} at |eta| = 2, n = 2.
  CHECK(testsupport::rel_err(v.imag(), kPi * kPi * std::exp(-4.0)) < 1e-10);
  CHECK(v.imag() >= 0.0);
}

TEST_CASE("q2_hat multilinear scaling") {
  const RadialProfile q = bessel_spectrum(1.0, 2);
  const ReducedRule rule = reduced_rule(2);
  const PVScheme scheme;
  const Complex base = q2_hat(q, 16.0, scheme, rule);
  for (double lambda : {0.5, 1.0, 2.0}) {
    const Complex scaled = q2_hat(lambda * q, 16.0, scheme, rule);
    CHECK(std::abs(scaled - lambda * lambda * base) / std::abs(scaled) < 1e-12);
  }
}

TEST_CASE("q3_hat") {
  PVScheme cheap;
  cheap.panel_order = 8;
  cheap.r_max = 17.0;
  Q3Options opt;
  opt.quad.order_polar = 16;

  SUBCASE("trilinear scaling") {
    const RadialProfile q = gaussian_spectrum(1.0);
    const Complex base = q3_hat(q, 2.0, 2, cheap, opt);
    const Complex scaled = q3_hat(2.0 * q, 2.0, 2, cheap, opt);
    CHECK(std::abs(scaled - 8.0 * base) / std::abs(scaled) < 1e-10);
  }
  SUBCASE("zero potential gives zero") {
    const RadialProfile zero =
        RadialProfile::analytic([](double) { return Complex(0.0, 0.0); }, nullptr, true);
    CHECK(std::abs(q3_hat(zero, 2.0, 2, cheap, opt)) == 0.0);
  }
  SUBCASE("self-convergence under r-grid refinement") {
    const RadialProfile q = gaussian_spectrum(1.0);
    const Q3Detailed d = q3_hat_detailed(q, 2.0, 2, cheap, opt);
    CHECK(d.refinement_rel < 1e-4);
  }
  SUBCASE("cost guard") {
    Q3Options huge;
    huge.quad.order_polar = 4096;
    huge.eval_budget = 1e6;
    const RadialProfile q = gaussian_spectrum(1.0);
    CHECK_THROWS_AS(q3_hat(q, 2.0, 2, PVScheme{}, huge), CostBudgetExceeded);
  }
}

TEST_CASE("born_approx") {
  BornOptions opts;
  opts.threads = 2;
  const Grid1D grid(4.0, 256.0, 24, Spacing::logarithmic);

  SUBCASE("J=2 algebra: residual = -chi q2, qB = chi(q + q2)") {
    const RadialProfile q = bessel_spectrum(1.0, 2);
    const BornResult res = born_approx(q, 2, 2, grid, opts);
    for (std::size_t i = 0; i < res.eta.size(); ++i) {
      if (res.masked[i]) continue;
      const double chi = cutoff_chi(res.cutoff, res.eta[i]);
      CHECK(res.residual_hat[i] == -chi * res.q2hat[i]);
      CHECK(res.qB_hat[i] == chi * res.qhat[i] + chi * res.q2hat[i]);
    }
    CHECK_FALSE(res.q3hat.has_value());
  }

  SUBCASE("scaling: residual of lambda q at J=2 is lambda^2 times") {
    const RadialProfile q = bessel_spectrum(1.0, 2);
    const BornResult a = born_approx(q, 2, 2, grid, opts);
    const BornResult b = born_approx(0.5 * q, 2, 2, grid, opts);
    for (std::size_t i = 0; i < a.eta.size(); ++i) {
      if (a.masked[i] || b.masked[i] || std::abs(a.residual_hat[i]) == 0.0) continue;
      CHECK(std::abs(b.residual_hat[i] - 0.25 * a.residual_hat[i]) /
                std::abs(a.residual_hat[i]) <
            1e-12);
    }
  }

  SUBCASE("reality structure: Re = P part, Im = pi S_1, recomputed independently") {
    const RadialProfile q = bessel_spectrum(1.0, 2);
    const ReducedRule rule = reduced_rule(2, opts.quad_order, opts.quad_levels);
    const BornResult res = born_approx(q, 2, 2, grid, opts);
    for (std::size_t i = 0; i < res.eta.size(); i += 5) {
      if (res.masked[i]) continue;
      const double eta = res.eta[i];
      const double s1 = s_r(q, eta, 1.0, rule).real();
      const double pp =
          pv_part([&](double r) { return s_r(q, eta, r, rule); }, opts.scheme).real();
      CHECK(res.q2hat[i].imag() == doctest::Approx(kPi * s1).epsilon(1e-12));
      CHECK(res.q2hat[i].real() == doctest::Approx(pp).epsilon(1e-12));
    }
  }

  SUBCASE("gaussian residual decays much faster than the potential") {
    const RadialProfile q = gaussian_spectrum(0.05);
    BornOptions gopts = opts;
    gopts.cutoff.c0 = 2.0;
    const Grid1D ggrid(2.0, 16.0, 24, Spacing::logarithmic);
    const BornResult res = born_approx(q, 2, 2, ggrid, gopts);
    std::vector<double> eta;
    std::vector<Complex> vq, vres;
    for (std::size_t i = 0; i < res.eta.size(); ++i) {
      if (res.masked[i] || cutoff_chi(res.cutoff, res.eta[i]) < 1.0) continue;
      eta.push_back(res.eta[i]);
      vq.push_back(res.qhat[i]);
      vres.push_back(res.residual_hat[i]);
    }
    const double eq =
        fit_decay(RadialProfile::sampled(eta, vq), eta.front(), eta.back()).exponent;
    const double er =
        fit_decay(RadialProfile::sampled(eta, vres), eta.front(), eta.back()).exponent;
    CHECK(er > eq + 3.0);  // envelope is the squared Gaussian
  }

  SUBCASE("unsupported order rejected") {
    const RadialProfile q = bessel_spectrum(1.0, 2);
    CHECK_THROWS_AS(born_approx(q, 4, 2, grid, opts), std::invalid_argument);
  }

  SUBCASE("serial and parallel sweeps agree bitwise") {
    const RadialProfile q = bessel_spectrum(1.0, 2);
    BornOptions serial = opts;
    serial.threads = 1;
    const BornResult a = born_approx(q, 2, 2, grid, opts);
    const BornResult b = born_approx(q, 2, 2, grid, serial);
    for (std::size_t i = 0; i < a.eta.size(); ++i) {
      CHECK(a.q2hat[i] == b.q2hat[i]);
      CHECK(a.residual_hat[i] == b.residual_hat[i]);
    }
  }
}

TEST_CASE("polarization_check") {
  const ReducedRule rule = reduced_rule(2);
  const RadialProfile f = gaussian_spectrum(0.9);
  SUBCASE("g = 0 collapses to the diagonal identity") {
    const RadialProfile zero =
        RadialProfile::analytic([](double) { return Complex(0.0, 0.0); }, nullptr, true);
    CHECK(polarization_check(f, zero, 2.0, 1.0, rule) < 1e-14);
  }
  SUBCASE("f = g is consistent with diagonal scaling") {
    CHECK(polarization_check(f, f, 2.0, 1.0, rule) < 1e-12);
  }
  SUBCASE("random smooth sampled profiles on [0, 16]") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> rho;
      std::vector<Complex> fv, gv;
      for (int i = 0; i < 200; ++i) {
        rho.push_back(16.0 * i / 199.0);
        fv.push_back(Complex(std::exp(-0.4 * rho.back()) * std::cos(0.7 * rho.back()), 0.0));
        gv.push_back(Complex(std::exp(-0.3 * rho.back()),
                             0.2 * unif(rng) * std::exp(-0.5 * rho.back())));
      }
      const RadialProfile fs = RadialProfile::sampled(rho, fv);
      const RadialProfile gs = RadialProfile::sampled(rho, gv);
      const double eta = 1.0 + 6.0 * unif(rng);
      const double r = 0.4 + 0.8 * unif(rng);
      CHECK(polarization_check(fs, gs, eta, r, rule) < 1e-10);
    }
  }
}
