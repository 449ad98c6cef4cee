#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swarmkin/angular_grid.hpp"

namespace swarmkin {

/// Periodic [0, L)² lattice. In pseudo-1D mode there is a single row
/// (m_y = 1, dy = L) and the y-sweep is never applied.
struct SpatialGrid {
  std::size_t m_x = 1;
  std::size_t m_y = 1;
  double length = 1.0;
  bool pseudo_1d = false;

  double dx() const noexcept { return length / static_cast<double>(m_x); }
  double dy() const noexcept { return length / static_cast<double>(m_y); }
  std::size_t cells() const noexcept { return m_x * m_y; }
  void validate() const;
};

SpatialGrid make_spatial_grid(double length, std::size_t m_x, std::size_t m_y, bool pseudo_1d = false);

/// f(x_i, y_j, θ_k) stored row-major in (i, j, k): the angular values of one
/// cell are contiguous.
class DistributionField {
 public:
  DistributionField(const SpatialGrid& grid, const AngularGrid& agrid, double fill = 0.0);

  const SpatialGrid& grid() const noexcept { return grid_; }
  const AngularGrid& agrid() const noexcept { return agrid_; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * grid_.m_y + j) * agrid_.size() + k;
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return values_[index(i, j, k)]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return values_[index(i, j, k)]; }

  std::span<double> cell(std::size_t i, std::size_t j) {
    return {values_.data() + index(i, j, 0), agrid_.size()};
  }
  std::span<const double> cell(std::size_t i, std::size_t j) const {
    return {values_.data() + index(i, j, 0), agrid_.size()};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Δx Δy Δθ Σ f.
  double total_mass() const;
  double min_value() const;

 private:
  SpatialGrid grid_;
  AngularGrid agrid_;
  std::vector<double> values_;
};

/// dx / c: the largest step with non-negative upwind coefficients.
double cfl_transport(double c, double dx);

/// First-order donor-cell advection, x-sweep then y-sweep, periodic.
/// Writes into `out` (must share the grids of `in`); `scratch` holds the
/// intermediate after the x-sweep. Throws std::invalid_argument when dt
/// violates dt <= min(dx, dy)/c (dx only in pseudo-1D mode).
void transport_step(const DistributionField& in, DistributionField& out, DistributionField& scratch,
                    double dt, double c);
DistributionField transport_step(const DistributionField& in, double dt, double c);

}  // namespace swarmkin
