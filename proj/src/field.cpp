#include "backscatter/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "backscatter/errors.hpp"

namespace backscatter {

namespace {

void check_finite(const std::vector<Complex>& samples, const char* what) {
  for (const Complex& v : samples)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

// FFTW planning is not thread-safe; execution of a created plan is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

void run_dft(const CartesianGrid& g, std::vector<Complex>& data, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    const int n = g.points_per_axis;
    plan = (g.dim == 2) ? fftw_plan_dft_2d(n, n, ptr, ptr, sign, FFTW_ESTIMATE)
                        : fftw_plan_dft_3d(n, n, n, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
}

// Parity (-1)^{sum of integer frequencies}; equals (-1)^{sum of storage
// indices} because N is even.
inline double parity(const CartesianGrid& g, std::size_t idx) {
  const std::size_t n = static_cast<std::size_t>(g.points_per_axis);
  std::size_t s;
  if (g.dim == 2) {
    s = idx / n + idx % n;
  } else {
    s = idx / (n * n) + (idx / n) % n + idx % n;
  }
  return (s & 1) ? -1.0 : 1.0;
}

}  // namespace

Field::Field(const CartesianGrid& g, std::vector<Complex> s) : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.node_count())
    throw std::invalid_argument("Field: sample count does not match grid");
}

SpectralField::SpectralField(const CartesianGrid& g, std::vector<Complex> s)
    : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.node_count())
    throw std::invalid_argument("SpectralField: sample count does not match grid");
}

SpectralField forward_transform(const Field& f) {
  check_finite(f.samples, "forward_transform");
  std::vector<Complex> out = f.samples;
  run_dft(f.grid, out, FFTW_FORWARD);
  // f̂(xi_k) = h^n (-1)^{sum k} DFT_k for the grid centered at the origin.
  const double hn = std::pow(f.grid.spacing(), f.grid.dim);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= hn * parity(f.grid, i);
  return {f.grid, std::move(out)};
}

Field inverse_transform(const SpectralField& F) {
  check_finite(F.samples, "inverse_transform");
  std::vector<Complex> out = F.samples;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= parity(F.grid, i);
  run_dft(F.grid, out, FFTW_BACKWARD);
  const double scale =
      std::pow(F.grid.points_per_axis * F.grid.spacing(), -F.grid.dim);
  for (Complex& v : out) v *= scale;
  return {F.grid, std::move(out)};
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (const Complex& v : f.samples) s += std::norm(v);
  return std::sqrt(s * std::pow(f.grid.spacing(), f.grid.dim));
}

double l2_norm(const SpectralField& F) {
  double s = 0.0;
  for (const Complex& v : F.samples) s += std::norm(v);
  return std::sqrt(s * std::pow(F.grid.dual_spacing(), F.grid.dim));
}

double sobolev_norm(const SpectralField& F, double alpha, double delta) {
  if (!std::isfinite(alpha) || !std::isfinite(delta))
    throw std::invalid_argument("sobolev_norm: alpha and delta must be finite");
  check_finite(F.samples, "sobolev_norm");
  SpectralField weighted = F;
  for_each_freq(F.grid, [&](std::size_t idx, const double* xi) {
    double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (F.grid.dim == 3) xi2 += xi[2] * xi[2];
    weighted.samples[idx] *= std::pow(1.0 + xi2, 0.5 * alpha);
  });
  if (delta == 0.0) {
    // Parseval: ||f||_2 = (2pi)^{-n/2} ||f̂||_2.
    return std::pow(2.0 * std::numbers::pi, -0.5 * F.grid.dim) * l2_norm(weighted);
  }
  Field g = inverse_transform(weighted);
  for_each_node(g.grid, [&](std::size_t idx, const double* x) {
    double x2 = x[0] * x[0] + x[1] * x[1];
    if (g.grid.dim == 3) x2 += x[2] * x[2];
    g.samples[idx] *= std::pow(1.0 + x2, 0.5 * delta);
  });
  return l2_norm(g);
}

double sobolev_norm(const Field& f, double alpha, double delta) {
  if (alpha == 0.0 && delta == 0.0) {
    check_finite(f.samples, "sobolev_norm");
    return l2_norm(f);
  }
  return sobolev_norm(forward_transform(f), alpha, delta);
}

Field fractional_laplacian(const Field& f, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("fractional_laplacian: beta must be >= 0");
  if (beta == 0.0) return f;
  SpectralField F = forward_transform(f);
  for_each_freq(F.grid, [&](std::size_t idx, const double* xi) {
    double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (F.grid.dim == 3) xi2 += xi[2] * xi[2];
    F.samples[idx] *= std::pow(xi2, 0.5 * beta);
  });
  return inverse_transform(F);
}

RadialProfile radial_average(const SpectralField& F) {
  check_finite(F.samples, "radial_average");
  const double w = F.grid.dual_spacing();
  const double rmax = F.grid.max_freq() * std::sqrt(static_cast<double>(F.grid.dim));
  const std::size_t nbins = static_cast<std::size_t>(rmax / w) + 2;
  std::vector<double> sums(nbins, 0.0);
  std::vector<std::size_t> counts(nbins, 0);
  for_each_freq(F.grid, [&](std::size_t idx, const double* xi) {
    double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (F.grid.dim == 3) xi2 += xi[2] * xi[2];
    const double rho = std::sqrt(xi2);
    std::size_t b = static_cast<std::size_t>(rho / w + 0.5);
    if (b >= nbins) b = nbins - 1;
    sums[b] += std::abs(F.samples[idx]);
    counts[b] += 1;
  });
  std::vector<double> centers;
  std::vector<Complex> means;
  for (std::size_t b = 0; b < nbins; ++b) {
    if (counts[b] == 0) continue;  // empty shell bins dropped
    centers.push_back(b * w);
    means.emplace_back(sums[b] / counts[b], 0.0);
  }
  return RadialProfile::sampled(std::move(centers), std::move(means));
}

}  // namespace backscatter
