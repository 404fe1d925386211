#pragma once

#include "backscatter/radial_profile.hpp"

namespace backscatter {

// Power-law decay of a radial spectrum over a window: |p(rho)| ≈
// e^{log_amplitude} <rho>^{-exponent}, fitted by unweighted least squares on
// log|p| vs log<rho>.
struct DecayFit {
  double exponent = 0.0;
  double log_amplitude = 0.0;
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  double residual_rms = 0.0;
  int point_count = 0;
};

// Sampled profiles fit over their nodes inside the window (at least 8
// required); analytic profiles are sampled on 64 log-spaced points.
DecayFit fit_decay(const RadialProfile& p, double rho_lo, double rho_hi);

}  // namespace backscatter
