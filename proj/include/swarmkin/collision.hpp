#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmkin/angular_grid.hpp"

namespace swarmkin {

enum class ModelKind { Vicsek, DFL };

std::string to_string(ModelKind model);
/// Accepts "vicsek" / "dfl" (case-insensitive).
ModelKind parse_model(const std::string& text);

struct CollisionParams {
  ModelKind model = ModelKind::Vicsek;
  double mu = 1.0;
  double sigma = 0.2;
  // Zero-flux threshold, relative to the local mass: the Vicsek drift is
  // switched off when |j| <= j_epsilon * rho.
  double j_epsilon = 1e-12;

  void validate() const;
};

/// Von Mises weights M_k = exp((μ_f/σ) cos(θ_k - θ̄)) and
/// M_{k+1/2} = exp((μ_f/σ) cos(θ_k + Δθ/2 - θ̄)), normalisation C₀ = 1.
struct VonMisesWeights {
  std::vector<double> node;
  std::vector<double> half;
  double mu_f = 0.0;
};

double effective_mu(const CollisionParams& params, const Moments& m);

/// Throws std::invalid_argument when mu_f > 0 and theta_bar is absent.
VonMisesWeights von_mises_weights(const AngularGrid& grid, std::optional<double> theta_bar,
                                  double mu_f, double sigma);

/// Flux-form discrete Fokker-Planck operator
///   Q_N(f)_k = σ/Δθ² [ M_{k+1/2}(f_{k+1}/M_{k+1} - f_k/M_k)
///                     - M_{k-1/2}(f_k/M_k - f_{k-1}/M_{k-1}) ].
/// The output is a rate and may be negative.
void apply_qn(std::span<const double> f, const VonMisesWeights& w, double sigma,
              const AngularGrid& grid, std::span<double> out);
AngularDistribution apply_qn(std::span<const double> f, const VonMisesWeights& w, double sigma,
                             const AngularGrid& grid);

/// Largest explicit-Euler step keeping Id + Δt·Q_N entrywise non-negative:
///   Δt_max = Δθ²/(2σ) · exp(-2 (μ_f/σ) sin(Δθ/4)).
double cfl_collision(double mu_f, double sigma, double dtheta);

class CflViolation : public std::runtime_error {
 public:
  CflViolation(double dt, double limit);
  double dt() const noexcept { return dt_; }
  double limit() const noexcept { return limit_; }

 private:
  double dt_, limit_;
};

class SubstepCapExceeded : public std::runtime_error {
 public:
  SubstepCapExceeded(std::size_t cap, double reached, double dt_total, double mu_f);
  std::size_t cap() const noexcept { return cap_; }
  double reached() const noexcept { return reached_; }
  double mu_f() const noexcept { return mu_f_; }

 private:
  std::size_t cap_;
  double reached_, mu_f_;
};

inline constexpr std::size_t kDefaultSubstepCap = 1'000'000;

struct AdaptStats {
  std::size_t substeps = 0;
  double elapsed = 0.0;      // sum of the sub-steps actually taken
  double min_substep = 0.0;
  double max_mu_f = 0.0;
};

/// Reusable buffers for stepping one angular distribution. One kernel per
/// thread; the kernel itself holds no state between calls beyond scratch.
class CollisionKernel {
 public:
  CollisionKernel(const AngularGrid& grid, const CollisionParams& params);

  /// One explicit Euler step in place. Weights are rebuilt from f first.
  /// Throws CflViolation if dt exceeds the bound for the current μ_f.
  void step(std::span<double> f, double dt);

  /// Advance by dt_total with sub-steps min(cfl(μ_f(s)), dt_total - s),
  /// refreshing μ_f after each. Throws SubstepCapExceeded if more than
  /// substep_cap sub-steps would be needed; f is then left at the partial
  /// state reached.
  AdaptStats adapt(std::span<double> f, double dt_total,
                   std::size_t substep_cap = kDefaultSubstepCap);

  const AngularGrid& grid() const noexcept { return *grid_; }
  const CollisionParams& params() const noexcept { return params_; }

 private:
  // Rebuilds weights from f and returns the step bound.
  double refresh(std::span<const double> f);
  void euler(std::span<double> f, double dt);

  const AngularGrid* grid_;
  CollisionParams params_;
  VonMisesWeights w_;
  std::vector<double> ratio_, rate_;
};

/// Copying convenience wrappers around CollisionKernel.
AngularDistribution collision_step(std::span<const double> f, double dt,
                                   const CollisionParams& params, const AngularGrid& grid);
AngularDistribution collision_adapt(std::span<const double> f, double dt_total,
                                    const CollisionParams& params, const AngularGrid& grid,
                                    AdaptStats* stats = nullptr,
                                    std::size_t substep_cap = kDefaultSubstepCap);

}  // namespace swarmkin
