#include "backscatter/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "backscatter/born.hpp"
#include "backscatter/field.hpp"
#include "backscatter/potentials.hpp"

namespace backscatter::verify {

namespace {

constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

std::string describe(double worst, double tol) {
  std::ostringstream os;
  os << "worst " << worst << " (tol " << tol << ")";
  return os.str();
}

SuiteResult suite_parseval(Rng& rng) {
  SuiteResult res;
  res.name = "parseval";
  const double tol = 1e-10;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int rep = 0; rep < 24; ++rep) {
    const int dim = (rep % 4 == 3) ? 3 : 2;
    const int npts = dim == 2 ? 64 : 32;
    CartesianGrid grid(dim, 4.0, npts);
    // Random band-limited spectrum, then the field it transforms from.
    SpectralField F(grid);
    const double cut = grid.max_freq() / 3.0;
    for_each_freq(grid, [&](std::size_t idx, const double* xi) {
      double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
      if (dim == 3) xi2 += xi[2] * xi[2];
      if (xi2 < cut * cut) F.samples[idx] = Complex(unif(rng), unif(rng));
    });
    const Field f = inverse_transform(F);
    const SpectralField F2 = forward_transform(f);
    ++res.cases;
    double diff2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < F.samples.size(); ++i) {
      diff2 += std::norm(F2.samples[i] - F.samples[i]);
      ref2 += std::norm(F.samples[i]);
    }
    const double roundtrip = std::sqrt(diff2 / ref2);
    const double parseval =
        std::abs(l2_norm(f) - std::pow(2.0 * kPi, -0.5 * dim) * l2_norm(F)) / l2_norm(f);
    const double metric = std::max(roundtrip, parseval);
    res.worst = std::max(res.worst, metric);
    if (metric > tol) ++res.failures;

    // Hermitian symmetry of the spectrum of the real part.
    Field fr = f;
    for (Complex& v : fr.samples) v = v.real();
    const SpectralField Fr = forward_transform(fr);
    const int N = grid.points_per_axis;
    double herm = 0.0, scale = 0.0;
    for_each_freq(grid, [&](std::size_t idx, const double*) {
      std::size_t conj_idx;
      if (dim == 2) {
        const int i = static_cast<int>(idx) / N, j = static_cast<int>(idx) % N;
        conj_idx = static_cast<std::size_t>(((N - i) % N) * N + (N - j) % N);
      } else {
        const int i = static_cast<int>(idx / (static_cast<std::size_t>(N) * N));
        const int j = static_cast<int>((idx / N) % N);
        const int k = static_cast<int>(idx % N);
        conj_idx = (static_cast<std::size_t>((N - i) % N) * N + (N - j) % N) * N + (N - k) % N;
      }
      herm = std::max(herm, std::abs(Fr.samples[idx] - std::conj(Fr.samples[conj_idx])));
      scale = std::max(scale, std::abs(Fr.samples[idx]));
    });
    ++res.cases;
    const double herm_rel = herm / scale;
    res.worst = std::max(res.worst, herm_rel);
    if (herm_rel > 1e-13) ++res.failures;
  }
  res.note = describe(res.worst, tol);
  return res;
}

SuiteResult suite_spheres(Rng& rng, bool corrupt) {
  SuiteResult res;
  res.name = "spheres";
  const double tol = 1e-12;
  std::uniform_real_distribution<double> unif(0.3, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int dim = (rep % 2) ? 3 : 2;
    SphereQuadrature quad = quad_rule(dim, 24);
    if (corrupt) quad.weights[0] *= 1.01;
    const double eta_abs = unif(rng) * 4.0;
    const double r = unif(rng);
    EwaldSphere sphere = EwaldSphere::axial(dim, eta_abs, r);

    // Surface measure.
    const Complex area = integrate_ewald(sphere, [](const auto&) { return Complex(1.0, 0.0); },
                                         quad);
    const double area_ref = unit_sphere_area(dim) * std::pow(sphere.radius(), dim - 1);
    ++res.cases;
    double metric = std::abs(area.real() - area_ref) / area_ref;
    res.worst = std::max(res.worst, metric);
    if (metric > tol) ++res.failures;

    // |xi|^2 + |eta-xi|^2 constant, (1+r^2)|eta|^2/2, at every node.
    const double want = (1.0 + r * r) * eta_abs * eta_abs / 2.0;
    double cmax = 0.0;
    const double R = sphere.radius();
    for (const auto& node : quad.nodes) {
      const double x0 = eta_abs / 2.0 + R * node[0], x1 = R * node[1], x2 = R * node[2];
      const double d0 = eta_abs - x0;
      const double v = x0 * x0 + x1 * x1 + x2 * x2 + d0 * d0 + x1 * x1 + x2 * x2;
      cmax = std::max(cmax, std::abs(v - want) / want);
    }
    ++res.cases;
    res.worst = std::max(res.worst, cmax);
    if (cmax > tol) ++res.failures;

    // xi -> eta - xi maps the sphere to itself.
    double inv = 0.0;
    for (const auto& node : quad.nodes) {
      const double x0 = eta_abs / 2.0 + R * node[0], x1 = R * node[1], x2 = R * node[2];
      const double m0 = (eta_abs - x0) - eta_abs / 2.0;
      const double dist = std::sqrt(m0 * m0 + x1 * x1 + x2 * x2);
      inv = std::max(inv, std::abs(dist - R) / R);
    }
    ++res.cases;
    res.worst = std::max(res.worst, inv);
    if (inv > 1e-14) ++res.failures;
  }
  res.note = describe(res.worst, tol);
  return res;
}

SuiteResult suite_trace(Rng& rng) {
  SuiteResult res;
  res.name = "trace";
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int dim = (rep % 2) ? 3 : 2;
    std::vector<GaussianMixture::Term> terms;
    const int nterms = 1 + static_cast<int>(unif(rng) * 3);
    for (int t = 0; t < nterms; ++t)
      terms.push_back({.amplitude = 2.0 * unif(rng) - 1.0,
                       .width = 0.4 + 2.0 * unif(rng),
                       .center = {2.0 * unif(rng) - 1.0, 2.0 * unif(rng) - 1.0,
                                  dim == 3 ? 2.0 * unif(rng) - 1.0 : 0.0}});
    GaussianMixture f(dim, std::move(terms));
    const double rho = 0.2 + 2.5 * unif(rng);
    const std::array<double, 3> center = {unif(rng), unif(rng), dim == 3 ? unif(rng) : 0.0};
    const TraceCheck check = check_trace(f, center, rho, quad_rule(dim, 32));
    ++res.cases;
    // lhs <= rhs with slack for the surface quadrature error.
    const double slack = 1e-8 * (std::abs(check.rhs) + 1.0);
    res.worst = std::max(res.worst, check.lhs - check.rhs);
    if (check.lhs > check.rhs + slack) ++res.failures;
  }
  res.note = "worst lhs-rhs " + std::to_string(res.worst) + " (must be <= 0)";
  return res;
}

SuiteResult suite_singular(Rng& rng) {
  SuiteResult res;
  res.name = "singular";
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sup_ratio = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int dim = (rep % 2) ? 3 : 2;
    const double lambda = 0.05 + unif(rng) * (0.5 * (dim - 1) - 0.05);
    const double rho = 0.1 + 8.0 * unif(rng);
    // Bias draws toward the sphere itself, where the integrand is singular.
    double xa;
    const double mode = unif(rng);
    if (mode < 0.4)
      xa = rho;  // on the sphere
    else if (mode < 0.7)
      xa = rho * (0.8 + 0.4 * unif(rng));
    else
      xa = rho * 12.0 * unif(rng);
    const std::array<double, 3> x = {xa, 0.0, 0.0};
    const double ratio = check_singular_bound(lambda, rho, x, dim, 16);
    ++res.cases;
    sup_ratio = std::max(sup_ratio, ratio);
    // Bounded by a constant depending only on lambda; generous envelope.
    const double envelope = 400.0 * unit_sphere_area(dim) / std::min(1.0, 2.0 * lambda);
    if (!(ratio > 0.0) || ratio > envelope) ++res.failures;

    if (rep % 10 == 0) {
      // Refinement stability.
      const double refined = check_singular_bound(lambda, rho, x, dim, 32);
      ++res.cases;
      const double drift = std::abs(refined - ratio) / refined;
      res.worst = std::max(res.worst, drift);
      if (drift > 1e-6) ++res.failures;
    }
  }
  res.note = "empirical sup of ratio " + std::to_string(sup_ratio);
  return res;
}

SuiteResult suite_pv(Rng&) {
  SuiteResult res;
  res.name = "pv";
  const double tol = 1e-6;
  const auto run = [&](const Family& family, double ref_rmax) {
    const Complex ref = pv_reference(family, 1e-9, ref_rmax);
    for (NearScheme near :
         {NearScheme::symmetric_reflection, NearScheme::taylor_subtraction}) {
      PVScheme scheme;
      scheme.near_scheme = near;
      const Complex got = pv_part(family, scheme);
      ++res.cases;
      const double scale = std::max(std::abs(ref), 1e-12);
      const double metric = std::abs(got - ref) / scale;
      res.worst = std::max(res.worst, metric);
      if (metric > tol) ++res.failures;
    }
  };
  run([](double r) { return Complex((1.0 - r) * std::exp(-r), 0.0); }, 512.0);
  run([](double r) { return Complex(r < 2.0 ? 1.0 : 0.0, 0.0); }, 512.0);
  run(
      [](double r) {
        // Closed form of the n=2 Gaussian dispersion family at |eta| = 2.
        return Complex(2.0 * kPi * r / (1.0 + r) * std::exp(-2.0 * (1.0 + r * r)), 0.0);
      },
      512.0);

  // Linearity on analytic families.
  {
    PVScheme scheme;
    const Family f = [](double r) { return Complex((1.0 - r) * std::exp(-r), 0.0); };
    const Family g = [](double r) { return Complex(std::exp(-2.0 * r), std::sin(r) * std::exp(-r)); };
    const Complex pf = pv_part(f, scheme), pg = pv_part(g, scheme);
    const Complex combined =
        pv_part([&](double r) { return 2.0 * f(r) - 0.5 * g(r); }, scheme);
    ++res.cases;
    const double metric =
        std::abs(combined - (2.0 * pf - 0.5 * pg)) / std::max(1e-12, std::abs(combined));
    res.worst = std::max(res.worst, metric);
    if (metric > 1e-12) ++res.failures;
  }
  res.note = describe(res.worst, tol);
  return res;
}

SuiteResult suite_polarization(Rng& rng) {
  SuiteResult res;
  res.name = "polarization";
  const double tol = 1e-10;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int dim = (rep % 2) ? 3 : 2;
    const ReducedRule rule = reduced_rule(dim, 12, 10);
    // Random smooth sampled profiles on [0, 16].
    const int nodes = 160;
    std::vector<double> rho(nodes);
    std::vector<Complex> fv(nodes), gv(nodes);
    const double w1 = 0.2 + 0.6 * unif(rng), w2 = 0.2 + 0.6 * unif(rng);
    const double a1 = 2.0 * unif(rng) - 1.0, a2 = 2.0 * unif(rng) - 1.0;
    for (int i = 0; i < nodes; ++i) {
      rho[i] = 16.0 * i / (nodes - 1);
      fv[i] = Complex(std::exp(-w1 * rho[i]) * (1.0 + a1 * std::cos(rho[i])), 0.0);
      gv[i] = Complex(std::exp(-w2 * rho[i]), a2 * std::exp(-rho[i]));
    }
    const RadialProfile f = RadialProfile::sampled(rho, fv);
    const RadialProfile g = RadialProfile::sampled(rho, gv);
    const double eta_abs = 1.0 + 6.0 * unif(rng);
    const double r = 0.3 + unif(rng);  // keeps probes inside [0, 16]
    ++res.cases;
    const double disc = polarization_check(f, g, eta_abs, r, rule);
    res.worst = std::max(res.worst, disc);
    if (disc > tol) ++res.failures;
  }
  res.note = describe(res.worst, tol);
  return res;
}

SuiteResult suite_multilinearity(Rng& rng) {
  SuiteResult res;
  res.name = "multilinearity";
  const double tol = 1e-12;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PVScheme scheme;
  for (int rep = 0; rep < 6; ++rep) {
    const int dim = (rep % 2) ? 3 : 2;
    const double beta = 0.5 + unif(rng);
    const RadialProfile q = bessel_spectrum(beta, dim);
    const ReducedRule rule = reduced_rule(dim, 12, 12);
    const double eta_abs = 4.0 + 28.0 * unif(rng);
    const Complex base = q2_hat(q, eta_abs, scheme, rule);
    for (double lambda : {0.5, 2.0}) {
      const Complex scaled = q2_hat(lambda * q, eta_abs, scheme, rule);
      ++res.cases;
      const double metric =
          std::abs(scaled - lambda * lambda * base) / std::abs(scaled);
      res.worst = std::max(res.worst, metric);
      if (metric > tol) ++res.failures;
    }
  }
  // One cubic case (j = 3), n = 2.
  {
    const RadialProfile q = gaussian_spectrum(1.0);
    PVScheme cheap;
    cheap.panel_order = 8;
    cheap.r_max = 17.0;
    Q3Options opt;
    opt.quad.order_polar = 16;
    const Complex base = q3_hat(q, 2.0, 2, cheap, opt);
    const Complex scaled = q3_hat(2.0 * q, 2.0, 2, cheap, opt);
    ++res.cases;
    const double metric = std::abs(scaled - 8.0 * base) / std::abs(scaled);
    res.worst = std::max(res.worst, metric);
    if (metric > 1e-10) ++res.failures;
  }
  res.note = describe(res.worst, tol);
  return res;
}

}  // namespace

std::vector<SuiteResult> run_verify(const VerifyOptions& options) {
  Rng rng(options.seed);
  std::vector<SuiteResult> out;
  const auto want = [&](const char* name) {
    return options.only.empty() || options.only == name;
  };
  // Each suite draws from its own stream so that suite filtering does not
  // change another suite's cases.
  if (want("parseval")) {
    Rng r(options.seed + 1);
    out.push_back(suite_parseval(r));
  }
  if (want("spheres")) {
    Rng r(options.seed + 2);
    out.push_back(suite_spheres(r, options.corrupt_quadrature));
  }
  if (want("trace")) {
    Rng r(options.seed + 3);
    out.push_back(suite_trace(r));
  }
  if (want("singular")) {
    Rng r(options.seed + 4);
    out.push_back(suite_singular(r));
  }
  if (want("pv")) {
    Rng r(options.seed + 5);
    out.push_back(suite_pv(r));
  }
  if (want("polarization")) {
    Rng r(options.seed + 6);
    out.push_back(suite_polarization(r));
  }
  if (want("multilinearity")) {
    Rng r(options.seed + 7);
    out.push_back(suite_multilinearity(r));
  }
  (void)rng;
  return out;
}

bool all_passed(const std::vector<SuiteResult>& results) {
  for (const auto& r : results)
    if (!r.passed()) return false;
  return !results.empty();
}

}  // namespace backscatter::verify
