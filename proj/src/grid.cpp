#include "backscatter/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backscatter {

Grid1D::Grid1D(double lo, double hi, int n, Spacing sp)
    : rho_min(lo), rho_max(hi), count(n), spacing(sp) {
  if (!(rho_min >= 0.0)) throw std::invalid_argument("Grid1D: rho_min must be >= 0");
  if (!(rho_min < rho_max)) throw std::invalid_argument("Grid1D: rho_min < rho_max required");
  if (count < 2) throw std::invalid_argument("Grid1D: count >= 2 required");
  if (spacing == Spacing::logarithmic && !(rho_min > 0.0))
    throw std::invalid_argument("Grid1D: logarithmic spacing requires rho_min > 0");
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (spacing == Spacing::linear) {
    const double h = (rho_max - rho_min) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = rho_min + i * h;
  } else {
    const double ratio = std::log(rho_max / rho_min) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = rho_min * std::exp(i * ratio);
  }
  out.front() = rho_min;
  out.back() = rho_max;
  return out;
}

CartesianGrid::CartesianGrid(int dim_, double half_extent_, int points_per_axis_)
    : dim(dim_), half_extent(half_extent_), points_per_axis(points_per_axis_) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("CartesianGrid: dim must be 2 or 3");
  if (!(half_extent > 0.0)) throw std::invalid_argument("CartesianGrid: half_extent must be positive");
  if (points_per_axis < 2 || points_per_axis % 2 != 0)
    throw std::invalid_argument("CartesianGrid: points_per_axis must be even and >= 2");
}

double CartesianGrid::dual_spacing() const { return std::numbers::pi / half_extent; }

std::size_t CartesianGrid::node_count() const {
  std::size_t n = static_cast<std::size_t>(points_per_axis);
  std::size_t c = n * n;
  if (dim == 3) c *= n;
  return c;
}

}  // namespace backscatter
