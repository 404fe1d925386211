#include "backscatter/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "backscatter/errors.hpp"
#include "backscatter/quadrature.hpp"

namespace backscatter {

namespace {
constexpr double kPi = std::numbers::pi;

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
}  // namespace

EwaldSphere::EwaldSphere(int dim_, std::array<double, 3> eta_, double r_)
    : dim(dim_), eta(eta_), r(r_) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("EwaldSphere: dim must be 2 or 3");
  if (dim == 2) eta[2] = 0.0;
  if (!(r > 0.0)) throw std::invalid_argument("EwaldSphere: r must be positive");
  if (!(eta_abs() > 0.0)) throw std::invalid_argument("EwaldSphere: eta must be nonzero");
}

EwaldSphere EwaldSphere::axial(int dim, double eta_abs, double r) {
  return EwaldSphere(dim, {eta_abs, 0.0, 0.0}, r);
}

double EwaldSphere::eta_abs() const { return std::sqrt(dot(eta, eta)); }

std::array<double, 3> EwaldSphere::center() const {
  return {eta[0] / 2.0, eta[1] / 2.0, eta[2] / 2.0};
}

double unit_sphere_area(int dim) {
  if (dim == 2) return 2.0 * kPi;
  if (dim == 3) return 4.0 * kPi;
  throw std::invalid_argument("unit_sphere_area: dim must be 2 or 3");
}

SphereQuadrature quad_rule(int dim, int order) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("quad_rule: dim must be 2 or 3");
  if (order < 4) throw std::invalid_argument("quad_rule: order must be >= 4");
  SphereQuadrature q;
  q.dim = dim;
  q.order = order;
  if (dim == 2) {
    const double w = 2.0 * kPi / order;
    q.nodes.reserve(order);
    for (int i = 0; i < order; ++i) {
      const double phi = w * i;
      q.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
      q.weights.push_back(w);
    }
  } else {
    const GaussRule& gl = gauss_legendre(order);
    const int naz = 2 * order;
    const double waz = 2.0 * kPi / naz;
    q.nodes.reserve(static_cast<std::size_t>(order) * naz);
    for (int i = 0; i < order; ++i) {
      const double t = gl.x[i];            // cos(psi)
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int j = 0; j < naz; ++j) {
        const double phi = waz * j;
        q.nodes.push_back({t, s * std::cos(phi), s * std::sin(phi)});
        q.weights.push_back(gl.w[i] * waz);
      }
    }
  }
  return q;
}

Complex integrate_ewald(const EwaldSphere& sphere, const PointFn& integrand,
                        const SphereQuadrature& quad) {
  if (quad.dim != sphere.dim) throw std::invalid_argument("integrate_ewald: dim mismatch");
  const double R = sphere.radius();
  const std::array<double, 3> c = sphere.center();
  const double measure = std::pow(R, sphere.dim - 1);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const std::array<double, 3> xi = {c[0] + R * quad.nodes[i][0], c[1] + R * quad.nodes[i][1],
                                      c[2] + R * quad.nodes[i][2]};
    const Complex v = integrand(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalDiagnostic("integrate_ewald: non-finite integrand value");
    acc += quad.weights[i] * v;
  }
  return measure * acc;
}

double check_singular_bound(double lambda, double rho, const std::array<double, 3>& x, int dim,
                            int order) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("check_singular_bound: dim 2 or 3");
  if (!(lambda > 0.0 && lambda <= 0.5 * (dim - 1)))
    throw std::invalid_argument("check_singular_bound: lambda in (0, (n-1)/2] required");
  if (!(rho > 0.0)) throw std::invalid_argument("check_singular_bound: rho must be positive");

  // By symmetry the integrand depends only on the polar angle psi between y
  // and x: |x-y|^2 = |x|^2 + rho^2 - 2 rho |x| cos(psi). Reduce to psi in
  // [0, pi] with weight rho^{n-1} omega_{n-2} sin^{n-2}(psi); the near point
  // sits at psi = 0, where dyadic panels accumulate.
  const double xabs = std::sqrt(dot(x, x));
  const double expo = 0.5 * (2.0 * lambda - (dim - 1));  // power of |x-y|^2
  auto f = [&](double psi) {
    // |x-y|^2 = (|x|-rho)^2 + 4 rho |x| sin^2(psi/2): cancellation-free when
    // x sits on the sphere and psi is tiny.
    const double s = std::sin(0.5 * psi);
    const double d2 = (xabs - rho) * (xabs - rho) + 4.0 * rho * xabs * s * s;
    const double kern = std::pow(d2, expo);
    return dim == 3 ? kern * std::sin(psi) : kern;
  };

  const GaussRule& gl = gauss_legendre(std::max(8, order));
  std::vector<double> nodes, weights;
  // Levels resolve the integrable singularity: panel contributions shrink
  // like 2^{-2 lambda k}, so depth scales with 1/lambda.
  const int levels = std::min(400, static_cast<int>(40.0 / std::min(1.0, 2.0 * lambda)) + 20);
  double hi = kPi;
  for (int k = 0; k < levels; ++k) {
    const double lo = (k + 1 == levels) ? 0.0 : hi * 0.5;
    append_panel(gl, lo, hi, nodes, weights);
    hi = lo;
    if (hi == 0.0) break;
  }
  double integral = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) integral += weights[i] * f(nodes[i]);
  const double omega_prev = (dim == 3) ? 2.0 * kPi : 2.0;  // |S^{n-2}|
  integral *= omega_prev * std::pow(rho, dim - 1);
  if (!std::isfinite(integral))
    throw NumericalDiagnostic("check_singular_bound: integral did not converge");
  return integral / std::pow(rho, 2.0 * lambda);
}

GaussianMixture::GaussianMixture(int dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("GaussianMixture: dim 2 or 3");
  for (auto& t : terms_) {
    if (!(t.width > 0.0)) throw std::invalid_argument("GaussianMixture: widths must be positive");
    if (dim_ == 2) t.center[2] = 0.0;
  }
}

double GaussianMixture::value(const std::array<double, 3>& x) const {
  double s = 0.0;
  for (const Term& t : terms_) {
    const double dx = x[0] - t.center[0], dy = x[1] - t.center[1], dz = x[2] - t.center[2];
    s += t.amplitude * std::exp(-t.width * (dx * dx + dy * dy + dz * dz));
  }
  return s;
}

double GaussianMixture::l2_norm_sq() const {
  // ∫ e^{-a|x-p|^2} e^{-b|x-q|^2} = (pi/(a+b))^{n/2} e^{-ab|p-q|^2/(a+b)}
  double s = 0.0;
  for (const Term& ti : terms_)
    for (const Term& tj : terms_) {
      const double a = ti.width, b = tj.width;
      double pq2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        const double diff = ti.center[d] - tj.center[d];
        pq2 += diff * diff;
      }
      s += ti.amplitude * tj.amplitude * std::pow(kPi / (a + b), 0.5 * dim_) *
           std::exp(-a * b * pq2 / (a + b));
    }
  return s;
}

double GaussianMixture::grad_l2_norm_sq() const {
  double s = 0.0;
  for (const Term& ti : terms_)
    for (const Term& tj : terms_) {
      const double a = ti.width, b = tj.width, t = a + b;
      double pq2 = 0.0;
      std::array<double, 3> m{}, dpi{}, dpj{};
      for (int d = 0; d < 3; ++d) {
        m[d] = (a * ti.center[d] + b * tj.center[d]) / t;
        dpi[d] = m[d] - ti.center[d];
        dpj[d] = m[d] - tj.center[d];
      }
      for (int d = 0; d < 3; ++d) {
        const double diff = ti.center[d] - tj.center[d];
        pq2 += diff * diff;
      }
      // ∫ grad_i . grad_j = 4ab c_i c_j e^{-ab|p-q|^2/t} (pi/t)^{n/2}
      //                     (n/(2t) + (m-p_i).(m-p_j))
      const double inner = 0.5 * dim_ / t + dot(dpi, dpj);
      s += 4.0 * a * b * ti.amplitude * tj.amplitude * std::exp(-a * b * pq2 / t) *
           std::pow(kPi / t, 0.5 * dim_) * inner;
    }
  return s;
}

TraceCheck check_trace(const SmoothTestFunction& f, const std::array<double, 3>& center,
                       double rho, const SphereQuadrature& quad) {
  if (!(rho > 0.0)) throw std::invalid_argument("check_trace: rho must be positive");
  TraceCheck out;
  const double measure = std::pow(rho, quad.dim - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const std::array<double, 3> y = {center[0] + rho * quad.nodes[i][0],
                                     center[1] + rho * quad.nodes[i][1],
                                     center[2] + rho * quad.nodes[i][2]};
    const double v = f.value(y);
    acc += quad.weights[i] * v * v;
  }
  out.lhs = measure * acc;
  out.rhs = f.l2_norm_sq() + f.grad_l2_norm_sq();
  return out;
}

}  // namespace backscatter
