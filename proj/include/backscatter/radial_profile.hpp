#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace backscatter {

using Complex = std::complex<double>;

// Radial function of rho = |xi|: either grid samples (cubic-spline
// interpolated off-grid) or an analytic evaluator. Carries q-hat and every
// other spectrum-like quantity in the artifact.
class RadialProfile {
 public:
  using Evaluator = std::function<Complex(double)>;

  RadialProfile() = default;

  // Sampled profile on strictly increasing nodes. When derivative values are
  // present they are validated against centered finite differences of the
  // samples; the documented interpolation tolerance is 8% of the derivative
  // scale (second-order differences on smooth data sit well inside it).
  static RadialProfile sampled(std::vector<double> rho, std::vector<Complex> values,
                               std::optional<std::vector<Complex>> derivative_values = std::nullopt);

  static RadialProfile analytic(Evaluator value, Evaluator derivative = nullptr,
                                bool real_valued = false);

  bool is_sampled() const { return sampled_ != nullptr; }
  bool is_real() const { return real_; }
  bool has_derivative() const;
  // Largest evaluable radius; +inf for analytic profiles.
  double rho_max() const;

  // Throws ExtrapolationError above rho_max. Below the first sampled node the
  // value is clamped to the front sample (profiles start at or near 0).
  Complex value(double rho) const;
  Complex derivative(double rho) const;  // throws if no derivative data

  // Node access for sampled profiles (empty for analytic ones).
  const std::vector<double>& nodes() const;
  const std::vector<Complex>& values() const;

  // Pointwise combinations, used by polarization checks. Sampled inputs must
  // share their node set.
  friend RadialProfile operator+(const RadialProfile& a, const RadialProfile& b);
  friend RadialProfile operator*(double c, const RadialProfile& p);

 private:
  struct Sampled;
  std::shared_ptr<const Sampled> sampled_;
  Evaluator value_fn_;
  Evaluator deriv_fn_;
  bool real_ = false;
};

}  // namespace backscatter
