#pragma once

#include <string>

#include "backscatter/decay.hpp"
#include "backscatter/field.hpp"

namespace backscatter {

struct PotentialSpec {
  enum class Kind { gaussian, bessel_power, g_beta, custom_sampled };
  Kind kind = Kind::bessel_power;
  int dim = 2;
  double a = 1.0;           // gaussian width parameter
  double beta = 1.0;        // bessel_power / g_beta regularity
  double bump_scale = 1.0;  // g_beta cutoff scale
  std::string csv_path;     // custom_sampled

  void validate() const;
};

// Radial mollifier e^{-1/(1-(r/scale)^2)} on r < scale, 0 outside. Peak
// value e^{-1}, no rescaling.
double bump_value(double r, double scale);

// Samples the mollifier; scale must fit inside the grid half extent.
Field make_bump(double scale, const CartesianGrid& grid);

// phi * phi via the transform; spectrum is phi-hat squared, so nonnegative
// for real phi, and the support radius doubles.
Field bump_autoconv(const Field& phi);

// Bessel-kernel spectrum <rho>^{-n/2-beta}, analytic with derivative.
RadialProfile bessel_spectrum(double beta, int dim);

// Oracle profile e^{-a rho^2}, analytic with derivative.
RadialProfile gaussian_spectrum(double a);

struct GBetaResult {
  Field g;
  SpectralField ghat;
  double support_radius = 0.0;  // 2 * bump_scale
  DecayFit diagnostic_fit;      // decay of |ghat| over the default window
};

// g_beta = (phi*phi) G_beta on the grid. Throws InsufficientResolution when
// the spectrum is not yet asymptotic over [max(8, 8/scale), min(128,
// 0.8*xi_max)] (residual threshold 0.08, exponent drift 0.25).
GBetaResult make_g_beta(double beta, double bump_scale, const CartesianGrid& grid);

// Dispatch for config-driven experiments (gaussian / bessel_power only; the
// grid-built kinds need a CartesianGrid and are assembled by their callers).
RadialProfile make_profile(const PotentialSpec& spec);

}  // namespace backscatter
