#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "swarmkin/angular_grid.hpp"
#include "swarmkin/collision.hpp"
#include "swarmkin/run_record.hpp"
#include "swarmkin/transport.hpp"

namespace swarmkin {

enum class InitKind { Random, HomogeneousBand, Smooth19, UniformVonMises };

std::string to_string(InitKind kind);
InitKind parse_init_kind(const std::string& text);

struct InitSpec {
  InitKind kind = InitKind::Random;
  double amplitude = 0.5;  // Random: relative noise amplitude in [0, 1)
  double mean_rho = 0.0763;
  double kappa = 5.0;      // UniformVonMises concentration
  double angle = 0.0;      // UniformVonMises orientation
};

enum class SnapshotFormat { Text, Binary };

struct SolverConfig {
  ModelKind model = ModelKind::DFL;
  double mu = 1.0;
  double sigma = 0.2;
  double c = 1.0;
  double length = 10.0;
  std::size_t m_x = 100;
  std::size_t m_y = 100;
  std::size_t n_theta = 30;
  bool pseudo_1d = false;
  double t_end = 1.0;
  double transport_cfl_factor = 1.0;
  std::uint64_t seed = 1;
  InitSpec init;
  double snapshot_every = 1.0;
  double diag_every = 1.0;
  SnapshotFormat snapshot_format = SnapshotFormat::Binary;
  std::size_t substep_cap = kDefaultSubstepCap;
  double j_epsilon = 1e-12;

  CollisionParams collision() const { return {model, mu, sigma, j_epsilon}; }
  SpatialGrid spatial_grid() const;
  double time_step() const;
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// Twisted smooth profile (1.1 + cos 4θ)·exp(-cos(π(s + s⁸))), s = θ/2π.
double smooth19(double theta);
/// ρ(1 + (1/5) Σ_{p ∈ {1,2,3,5,7}} cos(pθ)).
double prime_cosine(double theta, double rho);
/// ρ̄(1 + (1/10) Σ_{p ∈ {1,2,3,5,7}} [cos(pθ) + cos(2πpx/L)]).
double homogeneous_band(double x, double theta, double mean_rho, double length);

/// Throws std::invalid_argument if the initial data would not be strictly positive.
DistributionField init_field(const SolverConfig& cfg);

struct DensityFlux {
  std::vector<double> rho;  // index i*m_y + j
  std::vector<double> jx, jy;
  double mass = 0.0;
  double rho_bar = 0.0;  // mass / (2πL²)
};
DensityFlux density_and_flux(const DistributionField& field);

/// Lie splitting: one transport step at Δt then, cell by cell, the adaptive
/// collision over Δt.
class KineticSolver {
 public:
  explicit KineticSolver(const SolverConfig& cfg);
  KineticSolver(const SolverConfig& cfg, DistributionField initial);
  KineticSolver(const KineticSolver&) = delete;
  KineticSolver& operator=(const KineticSolver&) = delete;

  /// Advances one Δt. On SubstepCapExceeded the field keeps its pre-step
  /// value and the exception propagates.
  void step();

  double time() const noexcept { return static_cast<double>(steps_) * dt_; }
  std::uint64_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return dt_; }
  std::size_t max_substeps_last_step() const noexcept { return max_substeps_; }
  const DistributionField& field() const noexcept { return field_; }
  const SolverConfig& config() const noexcept { return cfg_; }

 private:
  SolverConfig cfg_;
  AngularGrid agrid_;
  DistributionField field_, next_, scratch_;
  double dt_;
  std::uint64_t steps_ = 0;
  std::size_t max_substeps_ = 0;
};

SeriesRow diagnose(const DistributionField& field, double t, double mu, double sigma,
                   std::optional<double> kappa, std::size_t* floored = nullptr);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // snapshots/ and series.csv go here
  std::function<void(const KineticSolver&, const SeriesRow&)> on_diag;
};

RunRecord run(const SolverConfig& cfg, const RunOptions& options = {});
/// Same, from caller-supplied initial data.
RunRecord run(const SolverConfig& cfg, DistributionField initial, const RunOptions& options = {});

}  // namespace swarmkin
