#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "swarmkin/angular_grid.hpp"
#include "swarmkin/collision.hpp"
#include "swarmkin/run_record.hpp"
#include "swarmkin/transport.hpp"

namespace swarmkin {

/// Values below this are floored before taking logarithms.
inline constexpr double kEntropyFloor = 1e-300;

struct FreeEnergyValue {
  double entropy_part = 0.0;      // Δθ Σ f ln f
  double interaction_part = 0.0;  // |j| (Vicsek) or ½|j|² (DFL)
  double total = 0.0;             // entropy_part - (μ/σ) interaction_part
  std::size_t floored = 0;
};

/// Throws std::domain_error if the result is not finite.
FreeEnergyValue free_energy(std::span<const double> f, ModelKind model, double mu, double sigma,
                            const AngularGrid& grid);

struct DissipationAudit {
  double l2_rate = 0.0;       // ⟨Q_N f, f⟩ weighted by 1/M
  double entropy_rate = 0.0;  // Σ Q_N(f)_k ln(f_k/M_k)
  // max over all basis pairs (a, b) of |⟨Q e_a, e_b⟩ - ⟨e_a, Q e_b⟩| in the
  // 1/M inner product, divided by the largest such matrix entry
  double symmetry_defect = 0.0;
};

/// Audit with the weights f itself induces.
DissipationAudit dissipation_audit(std::span<const double> f, const CollisionParams& params,
                                   const AngularGrid& grid);
/// Audit against arbitrary weights (e.g. a random concentration and angle).
DissipationAudit dissipation_audit(std::span<const double> f, const VonMisesWeights& w,
                                   double sigma, const AngularGrid& grid);

// ---------------------------------------------------------------------------
// Compatibility condition for the homogeneous von Mises state
//   2πρ̄ ∫cosθ e^{(μκ/σ)cosθ} dθ / ∫ e^{(μκ/σ)cosθ} dθ = κ.

enum class KappaBranch { Zero, Positive };

struct KappaSolution {
  double kappa = 0.0;
  double threshold_sigma = 0.0;  // πμρ̄
  KappaBranch branch = KappaBranch::Zero;
  double residual = 0.0;
};

/// ∫cosθ e^{a cosθ} / ∫e^{a cosθ}, trapezoid rule on 4096 nodes.
double von_mises_mean_cosine(double a);
/// ln ∫_0^{2π} e^{a cosθ} dθ, same quadrature.
double von_mises_log_partition(double a);
/// Left side minus right side of the compatibility condition.
double compatibility_residual(double kappa, double rho_bar, double mu, double sigma);
/// Bisection on (0, 2πρ̄]. Throws std::runtime_error on bracket failure.
KappaSolution solve_kappa(double rho_bar, double mu, double sigma);

struct VonMisesEntropyPoint {
  double concentration = 0.0;
  double j_norm = 0.0;   // |∫ω M|, M of unit mass
  double entropy = 0.0;  // ∫ M ln M
};
std::vector<VonMisesEntropyPoint> von_mises_entropy_curve(std::span<const double> concentrations);

// ---------------------------------------------------------------------------
// Field functionals; ρ̄ is ΔxΔyΔθ Σ f / (2πL²).

/// E_u = ΔxΔyΔθ Σ f ln(f/ρ̄). Throws std::domain_error if not finite.
double entropy_uniform(const DistributionField& field, std::size_t* floored = nullptr);
/// E_VM = ΔxΔyΔθ Σ f ln(f/M[ρ̄](θ)), M[ρ̄] centred at θ = 0 with κ from
/// solve_kappa. `kappa` may pass a precomputed solution for the field's ρ̄.
double entropy_vonmises(const DistributionField& field, double mu, double sigma,
                        std::optional<double> kappa = std::nullopt, std::size_t* floored = nullptr);
/// M[ρ̄](θ_k) on the given grid.
std::vector<double> vonmises_reference(const AngularGrid& grid, double rho_bar, double mu,
                                       double sigma, double kappa);

// ---------------------------------------------------------------------------

/// Least-squares slope of ln(err) against ln(h).
double fit_loglog_slope(std::span<const double> h, std::span<const double> err);

struct ResolutionSample {
  double dtheta = 0.0;
  std::vector<double> f;
};

struct AccuracyResult {
  std::vector<double> dtheta;
  std::vector<double> l2_error;
  double slope = 0.0;
};

/// L2 errors on the coarse nodes against a strictly finer nested reference
/// and the fitted order. Throws std::invalid_argument for fewer than three
/// resolutions or non-nested grids.
AccuracyResult accuracy_order(std::span<const ResolutionSample> family,
                              const ResolutionSample& reference);

struct PeriodEstimate {
  std::vector<double> peak_times;
  std::optional<double> period;
  // (max spacing - min spacing) / mean spacing over the window
  double spacing_variation = 0.0;
};

/// Peaks are local maxima whose prominence is at least
/// `min_prominence` × (max - min) of the analysed window, which is the final
/// `window_fraction` of the series. No period for fewer than three peaks.
PeriodEstimate dominant_period(std::span<const double> times, std::span<const double> values,
                               double window_fraction = 1.0 / 3.0, double min_prominence = 0.1);

struct MaxRhoAnalysis {
  std::vector<double> times;
  std::vector<double> max_rho;
  PeriodEstimate period;
};
MaxRhoAnalysis max_rho_series(const RunRecord& record, double min_prominence = 0.1);

/// L2 distance between f and the discrete von Mises sharing its mass and
/// mean angle. Concentration μ/σ for Vicsek, μκ/σ for DFL with κ from
/// solve_kappa at ρ̄ = mass/2π.
double equilibrium_gap(std::span<const double> f, const CollisionParams& params,
                       const AngularGrid& grid);

}  // namespace swarmkin
