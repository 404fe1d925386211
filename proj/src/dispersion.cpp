#include "backscatter/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "backscatter/errors.hpp"
#include "backscatter/quadrature.hpp"

namespace backscatter {

namespace {
constexpr double kPi = std::numbers::pi;

inline double radius_plus(double eta, double r, double t) {
  return 0.5 * eta * std::sqrt(std::max(0.0, 1.0 + r * r + 2.0 * r * t));
}
inline double radius_minus(double eta, double r, double t) {
  return 0.5 * eta * std::sqrt(std::max(0.0, 1.0 + r * r - 2.0 * r * t));
}
}  // namespace

ReducedRule reduced_rule(int dim, int order, int levels) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("reduced_rule: dim must be 2 or 3");
  if (order < 4 || levels < 1) throw std::invalid_argument("reduced_rule: order >= 4, levels >= 1");
  const GaussRule& gl = gauss_legendre(order);

  // Panel edges: pi/2^{k} toward psi = 0, mirrored toward psi = pi.
  std::vector<double> edges;
  edges.push_back(0.0);
  for (int k = levels; k >= 1; --k) edges.push_back(kPi / std::pow(2.0, k + 1));
  edges.push_back(kPi / 2.0);
  const std::size_t half = edges.size();
  for (std::size_t i = half - 1; i-- > 0;) edges.push_back(kPi - edges[i]);

  std::vector<double> psi, pw;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    append_panel(gl, edges[i], edges[i + 1], psi, pw);

  ReducedRule rule;
  rule.dim = dim;
  rule.order = order;
  rule.levels = levels;
  rule.t.resize(psi.size());
  rule.w.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    rule.t[i] = std::cos(psi[i]);
    // S^1: dsigma = R dpsi over [0,2pi), folded to 2 R ∫_0^pi.
    // S^2: dsigma = R^2 sin(psi) dpsi dphi with azimuth integrated out.
    rule.w[i] = (dim == 2) ? 2.0 * pw[i] : 2.0 * kPi * std::sin(psi[i]) * pw[i];
  }
  return rule;
}

Complex bilinear_s_r(const RadialProfile& fhat, const RadialProfile& ghat, double eta_abs,
                     double r, const ReducedRule& rule) {
  if (!(eta_abs > 0.0)) throw std::invalid_argument("s_r: eta_abs must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("s_r: r must be positive");
  const double R = 0.5 * r * eta_abs;
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    acc += rule.w[i] *
           fhat.value(radius_plus(eta_abs, r, rule.t[i])) *
           ghat.value(radius_minus(eta_abs, r, rule.t[i]));
  }
  const double measure = std::pow(R, rule.dim - 1);
  return 2.0 / (eta_abs * (1.0 + r)) * measure * acc;
}

Complex s_r(const RadialProfile& qhat, double eta_abs, double r, const ReducedRule& rule) {
  return bilinear_s_r(qhat, qhat, eta_abs, r, rule);
}

double k_r(const RadialProfile& fhat, const RadialProfile& ghat, double eta_abs, double r,
           const ReducedRule& rule) {
  if (!(eta_abs > 0.0)) throw std::invalid_argument("k_r: eta_abs must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("k_r: r must be positive");
  const double R = 0.5 * r * eta_abs;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    acc += rule.w[i] *
           std::abs(fhat.value(radius_plus(eta_abs, r, rule.t[i]))) *
           std::abs(ghat.value(radius_minus(eta_abs, r, rule.t[i])));
  }
  return std::pow(R, rule.dim - 1) * acc / eta_abs;
}

double ds_r_measure_coefficient(int dim, double r) {
  return ((dim - 2) * r + (dim - 1)) / (r * (1.0 + r) * (1.0 + r));
}

Complex ds_r(const RadialProfile& qhat, double eta_abs, double r, const ReducedRule& rule) {
  if (!qhat.has_derivative())
    throw std::invalid_argument("ds_r: profile carries no derivative data");
  if (!(eta_abs > 0.0 && r > 0.0)) throw std::invalid_argument("ds_r: eta_abs, r > 0 required");
  const double R = 0.5 * r * eta_abs;
  Complex surf{0.0, 0.0};   // ∫ qhat(xi) qhat(eta-xi)
  Complex grad{0.0, 0.0};   // ∫ theta.grad qhat(xi) qhat(eta-xi)
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const double t = rule.t[i];
    const double rho1 = radius_plus(eta_abs, r, t);
    const double rho2 = radius_minus(eta_abs, r, t);
    const Complex q2v = qhat.value(rho2);
    surf += rule.w[i] * qhat.value(rho1) * q2v;
    // theta.grad qhat(xi) = qhat'(|xi|) (theta.xi)/|xi|, theta.xi = (eta/2)t + R.
    if (rho1 > 0.0) {
      const double proj = (0.5 * eta_abs * t + R) / rho1;
      grad += rule.w[i] * qhat.derivative(rho1) * proj * q2v;
    }
  }
  const double measure = std::pow(R, rule.dim - 1);
  return ds_r_measure_coefficient(rule.dim, r) * (2.0 / eta_abs) * measure * surf +
         (2.0 / (1.0 + r)) * measure * grad;
}

Complex s_r_spherical(const RadialProfile& qhat, double eta_abs, double r,
                      const SphereQuadrature& quad) {
  const EwaldSphere sphere = EwaldSphere::axial(quad.dim, eta_abs, r);
  const auto integrand = [&](const std::array<double, 3>& xi) -> Complex {
    const double rho1 = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const double dx = eta_abs - xi[0];
    const double rho2 = std::sqrt(dx * dx + xi[1] * xi[1] + xi[2] * xi[2]);
    return qhat.value(rho1) * qhat.value(rho2);
  };
  return 2.0 / (eta_abs * (1.0 + r)) * integrate_ewald(sphere, integrand, quad);
}

double s_j_r_eval_cost(int j, int dim, const SjQuadrature& quad) {
  if (j == 2) return dim == 2 ? quad.order_polar : quad.order_polar;
  const double polar2 = static_cast<double>(quad.order_polar) * quad.order_polar;
  return dim == 2 ? polar2 : polar2 * quad.order_azimuth;
}

Complex s_j_r(const RadialProfile& qhat, double eta_abs, std::span<const double> r, int j,
              int dim, const SjQuadrature& quad) {
  if (j != 2 && j != 3) throw std::invalid_argument("s_j_r: only j in {2,3} is evaluated");
  if (static_cast<int>(r.size()) != j - 1)
    throw std::invalid_argument("s_j_r: need j-1 radii");
  if (dim != 2 && dim != 3) throw std::invalid_argument("s_j_r: dim must be 2 or 3");
  for (double ri : r)
    if (!(ri > 0.0)) throw std::invalid_argument("s_j_r: radii must be positive");
  if (!(eta_abs > 0.0)) throw std::invalid_argument("s_j_r: eta_abs must be positive");

  const int M = quad.order_polar;
  if (j == 2) {
    // Same formula as s_r; evaluated on the default graded rule.
    return s_r(qhat, eta_abs, r[0], reduced_rule(dim));
  }

  const double r1 = r[0], r2 = r[1];
  const double R1 = 0.5 * r1 * eta_abs, R2 = 0.5 * r2 * eta_abs;
  const double pref = (2.0 / (1.0 + r1)) * (2.0 / (1.0 + r2)) / (eta_abs * eta_abs);
  Complex acc{0.0, 0.0};
  if (dim == 2) {
    // xi_i = eta/2 + R_i (cos phi_i, sin phi_i); integrand depends on
    // cos phi_1, cos phi_2, cos(phi_1 - phi_2).
    const double w = 2.0 * kPi / M;
    std::vector<Complex> qm(M), qp(M);
    std::vector<double> c(M);
    for (int i = 0; i < M; ++i) {
      c[i] = std::cos(w * i);
      qm[i] = qhat.value(radius_minus(eta_abs, r1, c[i]));  // |eta - xi_1|
      qp[i] = qhat.value(radius_plus(eta_abs, r2, c[i]));   // |xi_2|
    }
    for (int i = 0; i < M; ++i) {
      for (int k = 0; k < M; ++k) {
        const double cd = std::cos(w * (i - k));
        const double mid =
            std::sqrt(std::max(0.0, R1 * R1 + R2 * R2 - 2.0 * R1 * R2 * cd));
        acc += (w * w) * qm[i] * qhat.value(mid) * qp[k];
      }
    }
    acc *= R1 * R2;
  } else {
    // Rotation invariance leaves (t_1, t_2, relative azimuth).
    const GaussRule& gl = gauss_legendre(M);
    const int Mphi = quad.order_azimuth;
    const double wphi = 2.0 * kPi / Mphi;
    std::vector<double> cphi(Mphi);
    for (int a = 0; a < Mphi; ++a) cphi[a] = std::cos(wphi * a);
    for (int i = 0; i < M; ++i) {
      const double t1 = gl.x[i];
      const double s1 = std::sqrt(std::max(0.0, 1.0 - t1 * t1));
      const Complex f1 = qhat.value(radius_minus(eta_abs, r1, t1));
      for (int k = 0; k < M; ++k) {
        const double t2 = gl.x[k];
        const double s2 = std::sqrt(std::max(0.0, 1.0 - t2 * t2));
        const Complex f3 = qhat.value(radius_plus(eta_abs, r2, t2));
        Complex inner{0.0, 0.0};
        for (int a = 0; a < Mphi; ++a) {
          const double cosang = t1 * t2 + s1 * s2 * cphi[a];
          const double mid =
              std::sqrt(std::max(0.0, R1 * R1 + R2 * R2 - 2.0 * R1 * R2 * cosang));
          inner += wphi * qhat.value(mid);
        }
        acc += gl.w[i] * gl.w[k] * f1 * inner * f3;
      }
    }
    acc *= 2.0 * kPi * (R1 * R1) * (R2 * R2);
  }
  return pref * acc;
}

void DispersionSample::validate() const {
  if (r_values.size() != values.size())
    throw std::invalid_argument("DispersionSample: r/value size mismatch");
  if (derivative_values && derivative_values->size() != values.size())
    throw std::invalid_argument("DispersionSample: derivative size mismatch");
  for (std::size_t i = 0; i + 1 < r_values.size(); ++i)
    if (!(r_values[i] < r_values[i + 1]))
      throw std::invalid_argument("DispersionSample: r values must be strictly increasing");
  for (const Complex& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("DispersionSample: non-finite value");
}

DispersionSample sample_dispersion(const RadialProfile& qhat, double eta_abs,
                                   std::vector<double> r_values, const ReducedRule& rule,
                                   bool with_derivative) {
  DispersionSample out;
  out.eta_abs = eta_abs;
  out.r_values = std::move(r_values);
  out.values.reserve(out.r_values.size());
  if (with_derivative) out.derivative_values.emplace();
  for (double r : out.r_values) {
    out.values.push_back(s_r(qhat, eta_abs, r, rule));
    if (with_derivative) out.derivative_values->push_back(ds_r(qhat, eta_abs, r, rule));
  }
  out.validate();
  return out;
}

}  // namespace backscatter
