#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "backscatter/potentials.hpp"
#include "backscatter/regularity.hpp"
#include "test_support.hpp"

using namespace backscatter;

TEST_CASE("bound_table anchors") {
  SUBCASE("m(4) = 2/5") { CHECK(bound_table(4, 1.0).m_value == 0.4); }
  SUBCASE("teo:Q2count ceiling at (4, 0.5) is 1") {
    CHECK(*bound_table(4, 0.5).teo_q2count_alpha_max == 1.0);
  }
  SUBCASE("gain cap 1 for n = 2") {
    for (double beta : {0.5, 1.0, 2.0, 7.0})
      CHECK(*bound_table(2, beta).teo_main2_alpha_sup - beta == 1.0);
  }
  SUBCASE("n=2, beta=1: main2 sup is beta + 1 = 2") {
    CHECK(*bound_table(2, 1.0).teo_main2_alpha_sup == 2.0);
  }
  SUBCASE("n=4: m = 0.4 and main1 first branch") {
    const BoundTable t = bound_table(4, 0.5);
    CHECK(*t.teo_main1_alpha_max == doctest::Approx(1.0));
  }
  SUBCASE("alpha_j at (3, 1.5, j=2) is 1") {
    CHECK(bound_table(3, 1.5).alpha_j(2) == doctest::Approx(1.0));
  }
  SUBCASE("teo.Qj rows") {
    // (n-1)/2 <= beta: beta + (j-1).
    CHECK(*bound_table(2, 1.0).teo_qj_alpha_sup(2) == doctest::Approx(2.0));
    CHECK(*bound_table(2, 1.0).teo_qj_alpha_sup(3) == doctest::Approx(3.0));
    // (n-3)/2 < beta < (n-1)/2: beta + (j-1)(beta - (n-3)/2).
    CHECK(*bound_table(3, 0.5).teo_qj_alpha_sup(2) == doctest::Approx(1.0));
    // beta <= (n-3)/2: no claim.
    CHECK_FALSE(bound_table(3, 0.0).teo_qj_alpha_sup(2).has_value());
  }
  SUBCASE("branch continuity of the q2count row at beta = (n-2)/2") {
    const double eps = 1e-9;
    const BoundTable lo = bound_table(4, 1.0 - eps);
    const BoundTable hi = bound_table(4, 1.0);
    CHECK(std::abs(*lo.teo_q2count_alpha_max - *hi.teo_q2count_alpha_max) < 1e-6);
  }
  SUBCASE("out-of-range parameters rejected") {
    CHECK_THROWS_AS(bound_table(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(bound_table(3, -0.5), std::invalid_argument);
  }
}

TEST_CASE("bound_table properties") {
  SUBCASE("counterexample ceiling is strictly increasing in beta") {
    for (int n : {2, 3, 4}) {
      double prev = -1e9;
      for (double beta = 0.05; beta < 4.0; beta += 0.05) {
        const double p = bound_table(n, beta).counterexample_p();
        CHECK(p > prev);
        prev = p;
      }
    }
  }
  SUBCASE("main2 <= main1 <= main2 + 1/2 in the gap region") {
    for (int n : {3, 4, 5, 6}) {
      const BoundTable probe = bound_table(n, 1.0);
      const double lo = std::max(probe.m_value, 0.0);
      const double hi = 0.5 * (n - 1);
      for (double beta = lo + 1e-6; beta < hi; beta += (hi - lo) / 23.0) {
        const BoundTable t = bound_table(n, beta);
        if (!t.teo_main1_alpha_max || !t.teo_main2_alpha_sup) continue;
        CHECK(*t.teo_main2_alpha_sup <= *t.teo_main1_alpha_max + 1e-12);
        CHECK(*t.teo_main1_alpha_max <= *t.teo_main2_alpha_sup + 0.5 + 1e-12);
        CHECK(t.open_gap());
      }
    }
  }
  SUBCASE("spec'd p values: {(2,1),(3,0.5)} -> 3, (3,1) -> min(3.5,4)") {
    CHECK(bound_table(2, 1.0).counterexample_p() == 3.0);
    CHECK(bound_table(3, 0.5).counterexample_p() == 3.0);
    CHECK(bound_table(3, 1.0).counterexample_p() == 3.5);
  }
}

TEST_CASE("counterexample experiment, small sweep") {
  CounterexampleOptions opts;
  opts.window_lo = 8.0;
  opts.window_hi = 128.0;
  opts.threads = 2;
  opts.band_diagnostic = true;
  const Grid1D grid(4.0, 256.0, 32, Spacing::logarithmic);
  const CounterexampleReport report = counterexample_experiment(2, 1.0, grid, opts);

  CHECK(report.p == 3.0);
  CHECK(report.margin == doctest::Approx(report.p - report.s_fit.exponent));
  CHECK_FALSE(report.open_gap);  // beta = 1 >= (n-1)/2 = 0.5
  for (double s : report.s_values) CHECK(s > 0.0);
  // Identity between the Q2 imaginary part and pi S at every node.
  for (std::size_t i = 0; i < report.eta.size(); ++i)
    CHECK(report.q2_values[i].imag() ==
          doctest::Approx(testsupport::kPi * report.s_values[i]).epsilon(1e-12));
  // Band restriction is a lower bound on the full integral.
  REQUIRE(report.band_fit.has_value());
  CHECK(report.band_fit->exponent >= report.s_fit.exponent - 0.5);

  const Q2CountCheck check = q2count_check(2, 1.0, report);
  CHECK(check.identity_gap < 1e-8);
  CHECK(check.ceiling == 2.0);  // min(beta+1, 2 beta + 1) = 2
}

TEST_CASE("counterexample open-gap labeling") {
  CounterexampleOptions opts;
  opts.with_q2 = false;
  opts.window_lo = 8.0;
  opts.window_hi = 64.0;
  const Grid1D grid(4.0, 128.0, 24, Spacing::logarithmic);
  const CounterexampleReport report = counterexample_experiment(3, 0.5, grid, opts);
  CHECK(report.open_gap);  // max(m,0)=0 <= 0.5 < 1
  CHECK(report.p == 3.0);
}

TEST_CASE("smoothing_check") {
  SUBCASE("gaussian profile passes trivially (super-polynomial gain)") {
    BornOptions opts;
    opts.cutoff.c0 = 2.0;
    opts.threads = 2;
    const Grid1D grid(2.0, 16.0, 24, Spacing::logarithmic);
    const BornResult res = born_approx(gaussian_spectrum(0.05), 2, 2, grid, opts);
    const SmoothingEntry entry = smoothing_check(res, 1.0, 2, 4.2, 16.0);
    CHECK(entry.pass);
    CHECK(entry.gain > 1.0);
  }
  SUBCASE("no claim below the first branch: entry passes with no prediction") {
    BornOptions opts;
    opts.threads = 2;
    const Grid1D grid(4.0, 128.0, 24, Spacing::logarithmic);
    const BornResult res = born_approx(bessel_spectrum(0.4, 3), 2, 3, grid, opts);
    // beta = 0 sits at (n-3)/2 = 0 for n = 3: teo.Qj makes no claim.
    const SmoothingEntry entry = smoothing_check(res, 0.0, 3, 9.0, 100.0);
    CHECK_FALSE(entry.predicted_gain.has_value());
    CHECK(entry.pass);
  }
}
