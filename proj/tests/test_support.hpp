#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "backscatter/sphere.hpp"

namespace testsupport {

inline constexpr double kPi = std::numbers::pi;

// S_r of the Gaussian profile e^{-a rho^2}: |xi|^2 + |eta-xi|^2 is constant
// (1+r^2)|eta|^2/2 on Gamma_r(eta), so the integrand is constant and
// S_r = 2/(|eta|(1+r)) * omega_{n-1} (r|eta|/2)^{n-1} e^{-a(1+r^2)|eta|^2/2}.
inline double gauss_s_r_closed(int n, double a, double eta, double r) {
  const double omega = backscatter::unit_sphere_area(n);
  return 2.0 / (eta * (1.0 + r)) * omega * std::pow(0.5 * r * eta, n - 1) *
         std::exp(-a * (1.0 + r * r) * eta * eta / 2.0);
}

// d/dr of the closed form: S_r * (((n-2)r + (n-1))/(r(1+r)) - a r |eta|^2).
inline double gauss_ds_r_closed(int n, double a, double eta, double r) {
  return gauss_s_r_closed(n, a, eta, r) *
         (((n - 2) * r + (n - 1)) / (r * (1.0 + r)) - a * r * eta * eta);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace testsupport
