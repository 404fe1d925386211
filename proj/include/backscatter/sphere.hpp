#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "backscatter/radial_profile.hpp"

namespace backscatter {

// Modified Ewald sphere: center eta/2, radius r|eta|/2. For r = 1 both the
// origin and eta lie on it.
struct EwaldSphere {
  int dim = 2;
  std::array<double, 3> eta{0, 0, 0};
  double r = 1.0;

  EwaldSphere(int dim_, std::array<double, 3> eta_, double r_);
  // eta along the first axis.
  static EwaldSphere axial(int dim, double eta_abs, double r);

  double eta_abs() const;
  double radius() const { return r * eta_abs() / 2.0; }
  std::array<double, 3> center() const;
};

// Unit-sphere rule: equispaced angles on S^1, Gauss-Legendre in cos(psi)
// times equispaced azimuth on S^2.
struct SphereQuadrature {
  int dim = 2;
  int order = 0;
  std::vector<std::array<double, 3>> nodes;  // unit vectors
  std::vector<double> weights;               // sum to |S^{n-1}|
};

SphereQuadrature quad_rule(int dim, int order);

using PointFn = std::function<Complex(const std::array<double, 3>&)>;

// Surface integral over the Ewald sphere: xi = eta/2 + (r|eta|/2) theta with
// measure factor (r|eta|/2)^{n-1}.
Complex integrate_ewald(const EwaldSphere& sphere, const PointFn& integrand,
                        const SphereQuadrature& quad);

// (∫_{S_rho(0)} |x-y|^{-(n-1)+2 lambda} dsigma) / rho^{2 lambda}; bounded
// uniformly in x and rho for 0 < lambda <= (n-1)/2. Integrable point
// singularity when x is near the sphere; handled by dyadic polar panels
// around the near point.
double check_singular_bound(double lambda, double rho, const std::array<double, 3>& x, int dim,
                            int order);

// Smooth test function with exact whole-space norms, for trace checks.
class SmoothTestFunction {
 public:
  virtual ~SmoothTestFunction() = default;
  virtual double value(const std::array<double, 3>& x) const = 0;
  virtual double l2_norm_sq() const = 0;
  virtual double grad_l2_norm_sq() const = 0;
};

// Sum of isotropic Gaussians c_i e^{-a_i |x - p_i|^2} with closed-form L^2
// norms of the function and its gradient.
class GaussianMixture : public SmoothTestFunction {
 public:
  struct Term {
    double amplitude;
    double width;  // a_i > 0
    std::array<double, 3> center;
  };
  GaussianMixture(int dim, std::vector<Term> terms);

  double value(const std::array<double, 3>& x) const override;
  double l2_norm_sq() const override;
  double grad_l2_norm_sq() const override;

 private:
  int dim_;
  std::vector<Term> terms_;
};

struct TraceCheck {
  double lhs = 0.0;  // ∫_{S_rho} |f|^2 dsigma
  double rhs = 0.0;  // ||f||^2 + ||grad f||^2
};

// Trace inequality with constant 1 on any sphere of radius rho centered at c.
TraceCheck check_trace(const SmoothTestFunction& f, const std::array<double, 3>& center,
                       double rho, const SphereQuadrature& quad);

// |S^{n-1}|.
double unit_sphere_area(int dim);

}  // namespace backscatter
