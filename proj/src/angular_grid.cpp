#include "swarmkin/angular_grid.hpp"

#include <cmath>
#include <tuple>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace swarmkin {

namespace {

// (cos, sin) of the angle 2π·a/(4n): a full turn is 4n units, so one unit is
// Δθ/4. Folding into the first octant uses only exact reflections.
std::pair<double, double> folded_direction(long long a, long long n) {
  const long long full = 4 * n;
  a %= full;
  if (a < 0) a += full;

  double cs = 1.0, sn = 1.0;  // sign factors
  bool swap = false;
  if (2 * a > full) {  // lower half plane: θ -> 2π - θ
    a = full - a;
    sn = -1.0;
  }
  if (a > n) {  // second quadrant: θ -> π - θ
    a = 2 * n - a;
    cs = -1.0;
  }
  if (2 * a > n) {  // upper octant: θ -> π/2 - θ
    a = n - a;
    swap = true;
  }
  const double angle = 0.5 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(n);
  double c = std::cos(angle);
  double s = std::sin(angle);
  if (swap) std::swap(c, s);
  return {cs * c, sn * s};
}

}  // namespace

AngularGrid::AngularGrid(std::size_t n_theta) : n_(n_theta) {
  if (n_theta < 3) {
    throw std::invalid_argument("angular grid needs n_theta >= 3, got " + std::to_string(n_theta));
  }
  dtheta_ = 2.0 * std::numbers::pi / static_cast<double>(n_);
  theta_.resize(n_);
  theta_half_.resize(n_);
  cos_node_.resize(n_);
  sin_node_.resize(n_);
  cos_half_.resize(n_);
  sin_half_.resize(n_);
  const auto n = static_cast<long long>(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    theta_[k] = static_cast<double>(k) * dtheta_;
    theta_half_[k] = theta_[k] + 0.5 * dtheta_;
    // node k sits at 4k units, midpoint at 4k + 2 units of a 4n-unit turn
    const auto kk = static_cast<long long>(k);
    std::tie(cos_node_[k], sin_node_[k]) = folded_direction(4 * kk, n);
    std::tie(cos_half_[k], sin_half_[k]) = folded_direction(4 * kk + 2, n);
  }
}

AngularGrid make_grid(std::size_t n_theta) { return AngularGrid(n_theta); }

Moments moments(std::span<const double> f, const AngularGrid& grid) {
  if (f.size() != grid.size()) {
    throw std::invalid_argument("distribution size does not match angular grid");
  }
  double rho = 0.0, jx = 0.0, jy = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    rho += f[k];
    jx += grid.cos_node(k) * f[k];
    jy += grid.sin_node(k) * f[k];
  }
  const double dth = grid.dtheta();
  Moments m;
  m.rho = dth * rho;
  m.jx = dth * jx;
  m.jy = dth * jy;
  m.j_norm = std::hypot(m.jx, m.jy);
  if (m.j_norm > 0.0) m.theta_bar = std::atan2(m.jy, m.jx);
  return m;
}

}  // namespace swarmkin
