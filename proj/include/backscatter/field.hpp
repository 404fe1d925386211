#pragma once

#include <complex>
#include <vector>

#include "backscatter/grid.hpp"
#include "backscatter/radial_profile.hpp"

namespace backscatter {

// Physical-side samples on a CartesianGrid, row-major, node i of axis d at
// coordinate -L + i*h.
struct Field {
  CartesianGrid grid;
  std::vector<Complex> samples;

  Field() = default;
  Field(const CartesianGrid& g, std::vector<Complex> s);
  explicit Field(const CartesianGrid& g) : Field(g, std::vector<Complex>(g.node_count())) {}
};

// Fourier-side samples; node i of axis d at frequency k(i)*pi/half_extent
// with k(i) in [-N/2, N/2) (wrapped FFT layout).
struct SpectralField {
  CartesianGrid grid;
  std::vector<Complex> samples;

  SpectralField() = default;
  SpectralField(const CartesianGrid& g, std::vector<Complex> s);
  explicit SpectralField(const CartesianGrid& g)
      : SpectralField(g, std::vector<Complex>(g.node_count())) {}
};

// Convention: f̂(xi) = ∫ f(x) e^{-i x.xi} dx, inverse carries (2pi)^{-n}.
SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& F);

double l2_norm(const Field& f);
double l2_norm(const SpectralField& F);

// ||<x>^delta <D>^alpha f||_{L^2}: spectral multiplier <xi>^alpha first, then
// the physical-side weight <x>^delta.
double sobolev_norm(const Field& f, double alpha, double delta);
double sobolev_norm(const SpectralField& F, double alpha, double delta);

// Fourier multiplier |xi|^beta; beta = 0 is the identity.
Field fractional_laplacian(const Field& f, double beta);

// Mean of |F| over shells of width equal to the dual grid spacing; empty
// bins are dropped.
RadialProfile radial_average(const SpectralField& F);

// Iterates grid nodes: fn(flat_index, x) with x the physical coordinates.
template <typename Fn>
void for_each_node(const CartesianGrid& g, Fn&& fn) {
  const int n = g.points_per_axis;
  double x[3] = {0, 0, 0};
  std::size_t idx = 0;
  if (g.dim == 2) {
    for (int i = 0; i < n; ++i) {
      x[0] = g.coord(i);
      for (int j = 0; j < n; ++j, ++idx) {
        x[1] = g.coord(j);
        fn(idx, x);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      x[0] = g.coord(i);
      for (int j = 0; j < n; ++j) {
        x[1] = g.coord(j);
        for (int k = 0; k < n; ++k, ++idx) {
          x[2] = g.coord(k);
          fn(idx, x);
        }
      }
    }
  }
}

// Same, with xi the spectral coordinates of the wrapped FFT layout.
template <typename Fn>
void for_each_freq(const CartesianGrid& g, Fn&& fn) {
  const int n = g.points_per_axis;
  double xi[3] = {0, 0, 0};
  std::size_t idx = 0;
  if (g.dim == 2) {
    for (int i = 0; i < n; ++i) {
      xi[0] = g.freq(i);
      for (int j = 0; j < n; ++j, ++idx) {
        xi[1] = g.freq(j);
        fn(idx, xi);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      xi[0] = g.freq(i);
      for (int j = 0; j < n; ++j) {
        xi[1] = g.freq(j);
        for (int k = 0; k < n; ++k, ++idx) {
          xi[2] = g.freq(k);
          fn(idx, xi);
        }
      }
    }
  }
}

}  // namespace backscatter
