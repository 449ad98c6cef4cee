#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace swarmkin {

/// Uniform grid on the circle with nodes θ_k = kΔθ, k = 0..n-1, and
/// midpoints θ_k + Δθ/2.
///
/// Direction tables (cos, sin) at nodes and midpoints are built with exact
/// quadrant reflections, so e.g. sin θ_k is exactly 0 at k = 0 and k = n/2
/// and cos(π - θ) == -cos θ bitwise whenever both angles are nodes.
class AngularGrid {
 public:
  explicit AngularGrid(std::size_t n_theta);

  std::size_t size() const noexcept { return n_; }
  double dtheta() const noexcept { return dtheta_; }

  double theta(std::size_t k) const { return theta_[k]; }
  double theta_half(std::size_t k) const { return theta_half_[k]; }

  double cos_node(std::size_t k) const { return cos_node_[k]; }
  double sin_node(std::size_t k) const { return sin_node_[k]; }
  double cos_half(std::size_t k) const { return cos_half_[k]; }
  double sin_half(std::size_t k) const { return sin_half_[k]; }

  std::span<const double> thetas() const noexcept { return theta_; }
  std::span<const double> cos_nodes() const noexcept { return cos_node_; }
  std::span<const double> sin_nodes() const noexcept { return sin_node_; }
  std::span<const double> cos_halves() const noexcept { return cos_half_; }
  std::span<const double> sin_halves() const noexcept { return sin_half_; }

  // cyclic neighbours
  std::size_t next(std::size_t k) const noexcept { return k + 1 == n_ ? 0 : k + 1; }
  std::size_t prev(std::size_t k) const noexcept { return k == 0 ? n_ - 1 : k - 1; }

 private:
  std::size_t n_;
  double dtheta_;
  std::vector<double> theta_, theta_half_;
  std::vector<double> cos_node_, sin_node_, cos_half_, sin_half_;
};

/// Throws std::invalid_argument for n_theta < 3.
AngularGrid make_grid(std::size_t n_theta);

/// Values f_k ≈ f(θ_k), density per radian.
using AngularDistribution = std::vector<double>;

struct Moments {
  double rho = 0.0;
  double jx = 0.0;
  double jy = 0.0;
  double j_norm = 0.0;
  // Absent when the flux vanishes.
  std::optional<double> theta_bar;
};

/// Discrete mass and flux: ρ = Δθ Σ f_k, j = Δθ Σ (cos θ_k, sin θ_k) f_k.
Moments moments(std::span<const double> f, const AngularGrid& grid);

}  // namespace swarmkin
