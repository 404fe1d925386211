#include "backscatter/radial_profile.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "backscatter/errors.hpp"

namespace backscatter {

namespace {

struct SplineDeleter {
  void operator()(gsl_spline* s) const { gsl_spline_free(s); }
  void operator()(gsl_interp_accel* a) const { gsl_interp_accel_free(a); }
};
using SplinePtr = std::unique_ptr<gsl_spline, SplineDeleter>;

SplinePtr make_spline(const std::vector<double>& x, const std::vector<double>& y) {
  SplinePtr s(gsl_spline_alloc(gsl_interp_cspline, x.size()));
  if (!s) throw std::runtime_error("RadialProfile: spline allocation failed");
  gsl_spline_init(s.get(), x.data(), y.data(), x.size());
  return s;
}

const bool gsl_handler_disabled = [] {
  gsl_set_error_handler_off();
  return true;
}();

}  // namespace

struct RadialProfile::Sampled {
  std::vector<double> rho;
  std::vector<Complex> values;
  std::optional<std::vector<Complex>> deriv;
  SplinePtr re, im, dre, dim_;

  Complex eval(const SplinePtr& sre, const SplinePtr& sim, double x) const {
    double a = 0, b = 0;
    gsl_spline_eval_e(sre.get(), x, nullptr, &a);
    gsl_spline_eval_e(sim.get(), x, nullptr, &b);
    return {a, b};
  }
};

RadialProfile RadialProfile::sampled(std::vector<double> rho, std::vector<Complex> values,
                                     std::optional<std::vector<Complex>> derivative_values) {
  if (rho.size() < 4) throw std::invalid_argument("RadialProfile: need >= 4 sample nodes");
  if (rho.size() != values.size())
    throw std::invalid_argument("RadialProfile: node/value size mismatch");
  for (std::size_t i = 0; i + 1 < rho.size(); ++i)
    if (!(rho[i] < rho[i + 1]))
      throw std::invalid_argument("RadialProfile: nodes must be strictly increasing");
  double scale = 0.0;
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("RadialProfile: non-finite sample");
    scale = std::max(scale, std::abs(v));
  }

  auto s = std::make_shared<Sampled>();
  s->rho = std::move(rho);
  s->values = std::move(values);
  std::vector<double> re(s->values.size()), im(s->values.size());
  bool real_valued = true;
  for (std::size_t i = 0; i < s->values.size(); ++i) {
    re[i] = s->values[i].real();
    im[i] = s->values[i].imag();
    if (im[i] != 0.0) real_valued = false;
  }
  s->re = make_spline(s->rho, re);
  s->im = make_spline(s->rho, im);

  if (derivative_values) {
    if (derivative_values->size() != s->values.size())
      throw std::invalid_argument("RadialProfile: derivative size mismatch");
    // Validate against centered differences on interior nodes.
    double dscale = 0.0;
    for (const Complex& d : *derivative_values) dscale = std::max(dscale, std::abs(d));
    for (std::size_t i = 1; i + 1 < s->rho.size(); ++i) {
      const Complex fd =
          (s->values[i + 1] - s->values[i - 1]) / (s->rho[i + 1] - s->rho[i - 1]);
      if (std::abs((*derivative_values)[i] - fd) > 0.08 * dscale + 1e-12 * scale)
        throw std::invalid_argument(
            "RadialProfile: derivative_values disagree with centered differences");
    }
    std::vector<double> dre(s->values.size()), dim(s->values.size());
    for (std::size_t i = 0; i < derivative_values->size(); ++i) {
      dre[i] = (*derivative_values)[i].real();
      dim[i] = (*derivative_values)[i].imag();
    }
    s->dre = make_spline(s->rho, dre);
    s->dim_ = make_spline(s->rho, dim);
    s->deriv = std::move(*derivative_values);
  }

  RadialProfile p;
  p.sampled_ = std::move(s);
  p.real_ = real_valued;
  return p;
}

RadialProfile RadialProfile::analytic(Evaluator value, Evaluator derivative, bool real_valued) {
  if (!value) throw std::invalid_argument("RadialProfile: null evaluator");
  RadialProfile p;
  p.value_fn_ = std::move(value);
  p.deriv_fn_ = std::move(derivative);
  p.real_ = real_valued;
  return p;
}

bool RadialProfile::has_derivative() const {
  if (sampled_) return sampled_->deriv.has_value();
  return static_cast<bool>(deriv_fn_);
}

double RadialProfile::rho_max() const {
  if (sampled_) return sampled_->rho.back();
  return std::numeric_limits<double>::infinity();
}

Complex RadialProfile::value(double rho) const {
  if (sampled_) {
    if (rho > sampled_->rho.back())
      throw ExtrapolationError("RadialProfile: rho beyond sampled window");
    if (rho <= sampled_->rho.front()) return sampled_->values.front();
    return sampled_->eval(sampled_->re, sampled_->im, rho);
  }
  return value_fn_(rho);
}

Complex RadialProfile::derivative(double rho) const {
  if (sampled_) {
    if (!sampled_->deriv)
      throw std::invalid_argument("RadialProfile: derivative values not provided");
    if (rho > sampled_->rho.back())
      throw ExtrapolationError("RadialProfile: rho beyond sampled window");
    if (rho <= sampled_->rho.front()) return sampled_->deriv->front();
    return sampled_->eval(sampled_->dre, sampled_->dim_, rho);
  }
  if (!deriv_fn_) throw std::invalid_argument("RadialProfile: no derivative evaluator");
  return deriv_fn_(rho);
}

const std::vector<double>& RadialProfile::nodes() const {
  static const std::vector<double> empty;
  return sampled_ ? sampled_->rho : empty;
}

const std::vector<Complex>& RadialProfile::values() const {
  static const std::vector<Complex> empty;
  return sampled_ ? sampled_->values : empty;
}

RadialProfile operator+(const RadialProfile& a, const RadialProfile& b) {
  if (a.is_sampled() != b.is_sampled())
    throw std::invalid_argument("RadialProfile: cannot mix sampled and analytic operands");
  if (a.is_sampled()) {
    if (a.nodes() != b.nodes())
      throw std::invalid_argument("RadialProfile: sampled operands need a common grid");
    std::vector<Complex> sum(a.values().size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a.values()[i] + b.values()[i];
    return RadialProfile::sampled(a.nodes(), std::move(sum));
  }
  auto av = a.value_fn_, bv = b.value_fn_;
  RadialProfile::Evaluator dsum;
  if (a.deriv_fn_ && b.deriv_fn_) {
    auto ad = a.deriv_fn_, bd = b.deriv_fn_;
    dsum = [ad, bd](double r) { return ad(r) + bd(r); };
  }
  return RadialProfile::analytic([av, bv](double r) { return av(r) + bv(r); }, dsum,
                                 a.is_real() && b.is_real());
}

RadialProfile operator*(double c, const RadialProfile& p) {
  if (p.is_sampled()) {
    std::vector<Complex> scaled(p.values().size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = c * p.values()[i];
    return RadialProfile::sampled(p.nodes(), std::move(scaled));
  }
  auto v = p.value_fn_;
  RadialProfile::Evaluator dv;
  if (p.deriv_fn_) {
    auto d = p.deriv_fn_;
    dv = [c, d](double r) { return c * d(r); };
  }
  return RadialProfile::analytic([c, v](double r) { return c * v(r); }, dv, p.is_real());
}

}  // namespace backscatter
