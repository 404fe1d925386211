#pragma once

#include <cstddef>
#include <vector>

namespace backscatter {

enum class Spacing { linear, logarithmic };

// 1-D grid in the radial variable rho = |xi|.
struct Grid1D {
  double rho_min = 0.0;
  double rho_max = 1.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  Grid1D() = default;
  Grid1D(double lo, double hi, int n, Spacing sp);

  std::vector<double> nodes() const;
};

// Cube [-half_extent, half_extent)^dim sampled with points_per_axis nodes
// per axis. Dual grid spacing is pi/half_extent.
struct CartesianGrid {
  int dim = 2;
  double half_extent = 1.0;
  int points_per_axis = 2;

  CartesianGrid() = default;
  CartesianGrid(int dim_, double half_extent_, int points_per_axis_);

  double spacing() const { return 2.0 * half_extent / points_per_axis; }
  double dual_spacing() const;
  std::size_t node_count() const;
  double coord(int i) const { return -half_extent + i * spacing(); }
  // Signed integer frequency index in [-N/2, N/2).
  int freq_index(int i) const {
    return i < points_per_axis / 2 ? i : i - points_per_axis;
  }
  double freq(int i) const { return freq_index(i) * dual_spacing(); }
  double max_freq() const { return (points_per_axis / 2) * dual_spacing(); }

  bool operator==(const CartesianGrid&) const = default;
};

}  // namespace backscatter
