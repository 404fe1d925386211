#include "backscatter/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "backscatter/errors.hpp"

namespace backscatter {

void PotentialSpec::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("PotentialSpec: dim must be 2 or 3");
  switch (kind) {
    case Kind::gaussian:
      if (!(a > 0.0)) throw std::invalid_argument("PotentialSpec: gaussian needs a > 0");
      break;
    case Kind::bessel_power:
      if (!(beta > 0.0)) throw std::invalid_argument("PotentialSpec: bessel_power needs beta > 0");
      break;
    case Kind::g_beta:
      if (!(beta > 0.0)) throw std::invalid_argument("PotentialSpec: g_beta needs beta > 0");
      if (!(bump_scale > 0.0))
        throw std::invalid_argument("PotentialSpec: g_beta needs bump_scale > 0");
      break;
    case Kind::custom_sampled:
      if (csv_path.empty())
        throw std::invalid_argument("PotentialSpec: custom_sampled needs csv_path");
      break;
  }
}

double bump_value(double r, double scale) {
  const double u = r / scale;
  if (u >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

Field make_bump(double scale, const CartesianGrid& grid) {
  if (!(scale > 0.0)) throw std::invalid_argument("make_bump: scale must be positive");
  if (scale >= grid.half_extent)
    throw std::invalid_argument("make_bump: scale must fit inside the grid half extent");
  Field f(grid);
  for_each_node(grid, [&](std::size_t idx, const double* x) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    if (grid.dim == 3) r2 += x[2] * x[2];
    f.samples[idx] = bump_value(std::sqrt(r2), scale);
  });
  return f;
}

Field bump_autoconv(const Field& phi) {
  for (const Complex& v : phi.samples)
    if (v.imag() != 0.0) throw std::invalid_argument("bump_autoconv: phi must be real");
  SpectralField F = forward_transform(phi);
  for (Complex& v : F.samples) v *= v;
  return inverse_transform(F);
}

RadialProfile bessel_spectrum(double beta, int dim) {
  if (!(beta > 0.0)) throw std::invalid_argument("bessel_spectrum: beta must be positive");
  if (dim != 2 && dim != 3) throw std::invalid_argument("bessel_spectrum: dim must be 2 or 3");
  const double s = 0.5 * dim + beta;
  return RadialProfile::analytic(
      [s](double rho) -> Complex { return std::pow(1.0 + rho * rho, -0.5 * s); },
      [s](double rho) -> Complex {
        return -s * rho * std::pow(1.0 + rho * rho, -0.5 * s - 1.0);
      },
      /*real_valued=*/true);
}

RadialProfile gaussian_spectrum(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("gaussian_spectrum: a must be positive");
  return RadialProfile::analytic(
      [a](double rho) -> Complex { return std::exp(-a * rho * rho); },
      [a](double rho) -> Complex { return -2.0 * a * rho * std::exp(-a * rho * rho); },
      /*real_valued=*/true);
}

GBetaResult make_g_beta(double beta, double bump_scale, const CartesianGrid& grid) {
  if (!(beta > 0.0)) throw std::invalid_argument("make_g_beta: beta must be positive");
  if (2.0 * bump_scale >= grid.half_extent)
    throw std::invalid_argument("make_g_beta: support 2*bump_scale must fit in the grid");

  Field conv = bump_autoconv(make_bump(bump_scale, grid));

  // G_beta from its spectrum on the same grid.
  SpectralField Ghat(grid);
  const double s = 0.5 * grid.dim + beta;
  for_each_freq(grid, [&](std::size_t idx, const double* xi) {
    double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (grid.dim == 3) xi2 += xi[2] * xi[2];
    Ghat.samples[idx] = std::pow(1.0 + xi2, -0.5 * s);
  });
  Field G = inverse_transform(Ghat);

  GBetaResult out;
  out.g = Field(grid);
  for (std::size_t i = 0; i < conv.samples.size(); ++i)
    out.g.samples[i] = conv.samples[i].real() * G.samples[i].real();
  out.ghat = forward_transform(out.g);
  out.support_radius = 2.0 * bump_scale;

  const double lo = std::max(8.0, 8.0 / bump_scale);
  const double hi = std::min(128.0, 0.8 * grid.max_freq());
  if (!(lo < hi))
    throw InsufficientResolution("make_g_beta: no usable fit window at this resolution", 0.0);
  out.diagnostic_fit = fit_decay(radial_average(out.ghat), lo, hi);
  const double target = 0.5 * grid.dim + beta;
  if (out.diagnostic_fit.residual_rms > 0.08 ||
      std::abs(out.diagnostic_fit.exponent - target) > 0.25)
    throw InsufficientResolution(
        "make_g_beta: spectrum not asymptotic over the fit window (exponent " +
            std::to_string(out.diagnostic_fit.exponent) + ", target " + std::to_string(target) +
            ")",
        out.diagnostic_fit.residual_rms);
  return out;
}

RadialProfile make_profile(const PotentialSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case PotentialSpec::Kind::gaussian:
      return gaussian_spectrum(spec.a);
    case PotentialSpec::Kind::bessel_power:
      return bessel_spectrum(spec.beta, spec.dim);
    default:
      throw std::invalid_argument("make_profile: kind requires a CartesianGrid pipeline");
  }
}

}  // namespace backscatter
