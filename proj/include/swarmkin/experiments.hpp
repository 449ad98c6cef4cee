#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmkin/angular_grid.hpp"
#include "swarmkin/collision.hpp"
#include "swarmkin/diagnostics.hpp"
#include "swarmkin/io.hpp"
#include "swarmkin/kinetic_solver.hpp"
#include "swarmkin/particles.hpp"

namespace swarmkin::experiments {

class UnknownPreset : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);

/// Samples a profile on the nodes of the grid.
AngularDistribution sample(const AngularGrid& grid, const std::function<double(double)>& profile);

// ---------------------------------------------------------------------------
// Homogeneous (space-free) collision runs.

struct HomogeneousTrace {
  std::vector<double> times;
  std::vector<AngularDistribution> samples;
  std::size_t substeps = 0;
  AngularDistribution final_f;
};

/// Explicit Euler with a fixed step (≤ the collision CFL bound, checked).
/// Samples every `stride` steps, plus t = 0 and the final time.
HomogeneousTrace run_homogeneous_fixed(AngularDistribution f, const CollisionParams& params,
                                       const AngularGrid& grid, double t_end, double dt,
                                       std::size_t stride = 0);
/// Adaptive sub-stepping over windows of the given length, sampled per window.
HomogeneousTrace run_homogeneous_adaptive(AngularDistribution f, const CollisionParams& params,
                                          const AngularGrid& grid, double t_end, double window,
                                          std::size_t cap = kDefaultSubstepCap);

// accuracy-order ------------------------------------------------------------

struct AccuracyConfig {
  ModelKind model = ModelKind::Vicsek;
  double mu = 1.0;
  double sigma = 0.2;
  double t_end = 1.0;
  double dt = 1e-3;
  std::vector<std::size_t> n_thetas{8, 16, 32, 64, 128};
  std::size_t n_reference = 256;
};

struct AccuracyReport {
  std::vector<std::size_t> n_thetas;
  AccuracyResult fit;
  AngularDistribution initial_reference, final_reference;
};

AccuracyReport accuracy_order_experiment(const AccuracyConfig& cfg);

// homogeneous-relaxation ----------------------------------------------------

struct RelaxationConfig {
  ModelKind model = ModelKind::Vicsek;
  double mu = 1.0;
  double sigma = 0.2;
  std::size_t n_theta = 64;
  double t_end = 10.0;
  double dt = 1e-3;
  double sample_every = 0.05;
};

struct RelaxationReport {
  std::vector<double> times;
  std::vector<FreeEnergyValue> free_energy;
  std::vector<double> gap;
  /// Least-squares fit of ln(gap) against t over the final half.
  double log_gap_slope = 0.0;
  double log_gap_r2 = 0.0;
  std::size_t first_increase = 0;  // 0 when the free energy never rises
  double worst_relative_rise = 0.0;
};

RelaxationReport relaxation_experiment(const RelaxationConfig& cfg);

// adaptive-vs-standard ------------------------------------------------------

struct AdaptiveConfig {
  double mu = 1.0;
  double sigma = 0.2;
  double rho = 1.0;
  double t_end = 1.0;
  double window = 0.1;
  std::vector<std::size_t> n_thetas{8, 16, 32, 64, 128};
  std::size_t n_reference = 256;
  /// Step of the standard method; 0 picks the CFL bound of the reference grid.
  double standard_dt = 0.0;
  std::size_t timing_repeats = 5;
};

struct AdaptiveRow {
  std::size_t n_theta = 0;
  double standard_error = 0.0;  // max-norm against the reference, shared nodes
  double adaptive_error = 0.0;
  double difference = 0.0;      // max-norm, standard vs adaptive
  double standard_seconds = 0.0;
  double adaptive_seconds = 0.0;
  std::size_t standard_steps = 0;
  std::size_t adaptive_substeps = 0;
};

struct AdaptiveReport {
  double standard_dt = 0.0;
  std::vector<AdaptiveRow> rows;
};

AdaptiveReport adaptive_vs_standard(const AdaptiveConfig& cfg);

// homogeneous DFL phase probe ----------------------------------------------

struct PhaseProbeConfig {
  double rho_bar = 0.05;
  double mu = 1.0;
  double sigma = 0.3;
  std::size_t n_theta = 64;
  double amplitude = 0.05;
  std::uint64_t seed = 1;
  double t_end = 200.0;
  double window = 0.5;
};

struct PhaseProbeReport {
  KappaSolution kappa;
  double sup_deviation_from_uniform = 0.0;  // ‖f − mass/2π‖∞
  double j_norm = 0.0;
  double mass = 0.0;
  AngularDistribution final_f;
};

PhaseProbeReport homogeneous_phase_probe(const PhaseProbeConfig& cfg);

// kinetic presets -----------------------------------------------------------

/// Solver configuration for vicsek-2d-longtime, dfl-band-2d, dfl-band-pseudo1d
/// and the per-point runs of phase-diagram.
SolverConfig solver_preset(const std::string& name);

struct SpatialStats {
  double t = 0.0;
  double rho_std = 0.0;  // spatial standard deviation of ρ
  double rho_max = 0.0;
  double rho_min = 0.0;
  double rho_mean = 0.0;
};
SpatialStats spatial_stats(const DistributionField& field, double t);

/// ρ and j averaged over y, one entry per x column.
struct XProfile {
  std::vector<double> x, rho, jx, jy;
};
XProfile x_profile(const DistributionField& field);

struct KineticReport {
  RunRecord record;
  std::vector<SpatialStats> stats;  // one per diagnostic time
  XProfile final_profile;
  MaxRhoAnalysis max_rho;
};

/// Runs the solver, writing series.csv and snapshots/ when out_dir is set and
/// diag/spatial.csv, diag/profiles.csv, diag/max_rho.csv besides.
KineticReport run_kinetic(const SolverConfig& cfg,
                          const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// phase-diagram -------------------------------------------------------------

struct PhaseScanConfig {
  double rho_min = 0.02, rho_max = 0.12;
  double sigma_min = 0.1, sigma_max = 0.4;
  std::size_t steps = 6;
  SolverConfig base = solver_preset("phase-diagram");
};

struct PhaseScanRow {
  double rho_bar = 0.0, sigma = 0.0, e_u = 0.0, e_vm = 0.0, kappa = 0.0;
  bool aborted = false;
};

inline constexpr const char* kPhaseHeader = "rho_bar,sigma,E_u,E_VM,kappa";

std::vector<PhaseScanRow> phase_scan(const PhaseScanConfig& cfg,
                                     const std::function<void(const PhaseScanRow&)>& on_row = {});
void write_phase_scan(const std::filesystem::path& path, const std::vector<PhaseScanRow>& rows);

// micro-band ----------------------------------------------------------------

MicroParams micro_preset(const std::string& name = "micro-band");
void apply_micro_option(MicroParams& p, const std::string& key, const std::string& value);
MicroParams micro_params_from(const KeyValues& kv, MicroParams base = micro_preset());
std::string format_micro_params(const MicroParams& p);

struct MicroSample {
  double t = 0.0;
  double polar_order = 0.0;
  double profile_peak_ratio = 0.0;  // max/mean of ρ̄ along the band axis
  double rho_flux_correlation = 0.0;  // ρ̄ against ρ̄ū, ū signed along the travel direction
  Axis axis = Axis::X;
};

struct MicroReport {
  ParticleState final_state;
  BandProfile final_profile;
  Axis axis = Axis::X;
  std::vector<MicroSample> samples;
  NeighborStats initial_neighbors;
};

/// Axis along which the swarm moves on average (larger |mean velocity component|).
Axis motion_axis(const ParticleState& s);
/// +1 or -1: sign of the mean velocity component along the axis.
double motion_sign(const ParticleState& s, Axis axis);
/// Pearson correlation of two equal-length samples; 0 if either is constant.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Writes snapshots/traj_*.csv, diag/band_profile.csv and diag/micro_series.csv
/// when out_dir is set.
MicroReport run_micro(const MicroParams& p,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace swarmkin::experiments
