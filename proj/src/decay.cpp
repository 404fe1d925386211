#include "backscatter/decay.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "backscatter/errors.hpp"

namespace backscatter {

DecayFit fit_decay(const RadialProfile& p, double rho_lo, double rho_hi) {
  if (!(rho_lo < rho_hi)) throw std::invalid_argument("fit_decay: rho_lo < rho_hi required");
  std::vector<double> xs, ys;
  if (p.is_sampled()) {
    for (std::size_t i = 0; i < p.nodes().size(); ++i) {
      const double rho = p.nodes()[i];
      if (rho < rho_lo || rho > rho_hi) continue;
      const double mag = std::abs(p.values()[i]);
      if (!(mag > 0.0))
        throw NumericalDiagnostic("fit_decay: zero magnitude inside the fit window");
      xs.push_back(0.5 * std::log1p(rho * rho));
      ys.push_back(std::log(mag));
    }
  } else {
    if (!(rho_lo > 0.0)) throw std::invalid_argument("fit_decay: analytic window needs rho_lo > 0");
    const int count = 64;
    const double step = std::log(rho_hi / rho_lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
      const double rho = rho_lo * std::exp(i * step);
      const double mag = std::abs(p.value(rho));
      if (!(mag > 0.0))
        throw NumericalDiagnostic("fit_decay: zero magnitude inside the fit window");
      xs.push_back(0.5 * std::log1p(rho * rho));
      ys.push_back(std::log(mag));
    }
  }
  if (xs.size() < 8)
    throw NumericalDiagnostic("fit_decay: window must contain at least 8 grid nodes");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (slope * xs[i] + intercept);
    ss += r * r;
  }
  DecayFit fit;
  fit.exponent = -slope;
  fit.log_amplitude = intercept;
  fit.rho_lo = rho_lo;
  fit.rho_hi = rho_hi;
  fit.residual_rms = std::sqrt(ss / n);
  fit.point_count = static_cast<int>(xs.size());
  if (!std::isfinite(fit.exponent)) throw NumericalDiagnostic("fit_decay: degenerate window");
  return fit;
}

}  // namespace backscatter
