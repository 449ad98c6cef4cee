#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "swarmkin/collision.hpp"

namespace swarmkin {

struct ParticleState {
  std::vector<double> x, y, theta;
  double time = 0.0;
  std::uint64_t step = 0;

  std::size_t size() const noexcept { return x.size(); }
};

struct MicroParams {
  std::size_t n_particles = 30000;
  double mu = 100.0;
  double sigma = 20.0;
  double c = 1.0;
  double radius = 0.02;
  double length = 4.0;
  double dt = 1e-2;
  ModelKind model = ModelKind::Vicsek;
  std::uint64_t seed = 1;
  bool include_self = true;
  double t_end = 52.0;
  double snapshot_every = 4.0;
  double profile_dx = 0.1;

  void validate() const;
};

/// Positions and headings i.i.d. uniform, keyed by (seed, i).
ParticleState random_state(const MicroParams& p);

/// Minimum-image offset b - a on a periodic interval of the given length.
double periodic_delta(double a, double b, double length) noexcept;

/// Uniform bucket grid over [0, L)². Cells are at least R wide; with fewer
/// than three per side the grid degenerates to one bucket (all pairs).
class CellList {
 public:
  CellList(const ParticleState& s, double radius, double length);

  /// Indices of every particle that can lie within R of (x, y), ascending.
  void candidates(double x, double y, std::vector<std::size_t>& out) const;
  std::size_t cells_per_side() const noexcept { return n_; }

 private:
  std::size_t cell_of(double v) const noexcept;

  std::size_t n_;
  double width_;
  std::vector<std::size_t> start_, items_;
};

/// j_i = Σ_{dist(x_j, x_i) ≤ R} (cos θ_j, sin θ_j), summed in index order.
std::array<double, 2> neighbor_flux(const ParticleState& s, std::size_t i, const MicroParams& p);
std::array<double, 2> neighbor_flux(const ParticleState& s, std::size_t i, const MicroParams& p,
                                    const CellList& cells, std::vector<std::size_t>& scratch);
std::vector<std::array<double, 2>> all_neighbor_fluxes(const ParticleState& s, const MicroParams& p);

/// One Euler–Maruyama step of the angular SDE, then motion with the new heading.
ParticleState step_particles(const ParticleState& s, const MicroParams& p);

struct BandProfile {
  std::vector<double> x;      // bin centres
  std::vector<double> rho;    // count / dx
  std::vector<double> rho_u;  // Σ cos θ / dx
  std::vector<double> u;      // rho_u / rho, 0 in empty bins
  std::vector<bool> empty;
};

enum class Axis { X, Y };

/// Profile along the given axis; velocity component along the same axis.
/// Throws std::invalid_argument unless dx divides L.
BandProfile band_profile(const ParticleState& s, double dx, double length, Axis axis = Axis::X);

struct NeighborStats {
  double empirical = 0.0;  // mean of (count within R, self included) − 1
  double homogeneous_estimate = 0.0;  // πR²N/L²
};
NeighborStats avg_neighbors(const ParticleState& s, double radius, double length);

/// Polar order |Σ ω_i| / N.
double polar_order(const ParticleState& s);

void write_trajectory(const std::filesystem::path& path, const ParticleState& s);
/// Appends rows t,bin,rho_bar,u_bar; writes the header when the file is new.
void append_band_profile(const std::filesystem::path& path, double t, const BandProfile& prof);

}  // namespace swarmkin
