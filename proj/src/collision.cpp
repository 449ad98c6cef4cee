#include "swarmkin/collision.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace swarmkin {

namespace {

std::string describe_cfl(double dt, double limit) {
  std::ostringstream os;
  os.precision(17);
  os << "collision step dt=" << dt << " exceeds the CFL bound " << limit;
  return os.str();
}

std::string describe_cap(std::size_t cap, double reached, double dt_total, double mu_f) {
  std::ostringstream os;
  os.precision(17);
  os << "collision sub-step cap " << cap << " exceeded at s=" << reached << " of " << dt_total
     << " (mu_f=" << mu_f << ")";
  return os.str();
}

void fill_weights(const AngularGrid& grid, std::optional<double> theta_bar, double mu_f,
                  double sigma, VonMisesWeights& w) {
  const std::size_t n = grid.size();
  w.node.resize(n);
  w.half.resize(n);
  w.mu_f = mu_f;
  if (mu_f == 0.0) {
    std::fill(w.node.begin(), w.node.end(), 1.0);
    std::fill(w.half.begin(), w.half.end(), 1.0);
    return;
  }
  const double kappa = mu_f / sigma;
  const double cb = std::cos(*theta_bar);
  const double sb = std::sin(*theta_bar);
  for (std::size_t k = 0; k < n; ++k) {
    // cos(θ - θ̄) = cos θ cos θ̄ + sin θ sin θ̄
    w.node[k] = std::exp(kappa * (grid.cos_node(k) * cb + grid.sin_node(k) * sb));
    w.half[k] = std::exp(kappa * (grid.cos_half(k) * cb + grid.sin_half(k) * sb));
  }
}

}  // namespace

std::string to_string(ModelKind model) { return model == ModelKind::Vicsek ? "vicsek" : "dfl"; }

ModelKind parse_model(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "vicsek") return ModelKind::Vicsek;
  if (lower == "dfl") return ModelKind::DFL;
  throw std::invalid_argument("unknown model '" + text + "' (expected vicsek or dfl)");
}

void CollisionParams::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(j_epsilon >= 0.0)) throw std::invalid_argument("j_epsilon must be non-negative");
}

double effective_mu(const CollisionParams& params, const Moments& m) {
  if (params.model == ModelKind::DFL) return params.mu * m.j_norm;
  return m.j_norm > params.j_epsilon * m.rho ? params.mu : 0.0;
}

VonMisesWeights von_mises_weights(const AngularGrid& grid, std::optional<double> theta_bar,
                                  double mu_f, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(mu_f >= 0.0)) throw std::invalid_argument("mu_f must be non-negative");
  if (mu_f > 0.0 && !theta_bar) {
    throw std::invalid_argument("von Mises weights with mu_f > 0 need a defined mean angle");
  }
  VonMisesWeights w;
  fill_weights(grid, theta_bar, mu_f, sigma, w);
  return w;
}

void apply_qn(std::span<const double> f, const VonMisesWeights& w, double sigma,
              const AngularGrid& grid, std::span<double> out) {
  const std::size_t n = grid.size();
  const double scale = sigma / (grid.dtheta() * grid.dtheta());
  // face flux through k+1/2; each face enters two cells with opposite signs
  double left_face = w.half[n - 1] * (f[0] / w.node[0] - f[n - 1] / w.node[n - 1]);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = grid.next(k);
    const double right_face = w.half[k] * (f[kp] / w.node[kp] - f[k] / w.node[k]);
    out[k] = scale * (right_face - left_face);
    left_face = right_face;
  }
}

AngularDistribution apply_qn(std::span<const double> f, const VonMisesWeights& w, double sigma,
                             const AngularGrid& grid) {
  AngularDistribution out(grid.size());
  apply_qn(f, w, sigma, grid, out);
  return out;
}

double cfl_collision(double mu_f, double sigma, double dtheta) {
  return dtheta * dtheta / (2.0 * sigma) * std::exp(-2.0 * (mu_f / sigma) * std::sin(0.25 * dtheta));
}

CflViolation::CflViolation(double dt, double limit)
    : std::runtime_error(describe_cfl(dt, limit)), dt_(dt), limit_(limit) {}

SubstepCapExceeded::SubstepCapExceeded(std::size_t cap, double reached, double dt_total,
                                       double mu_f)
    : std::runtime_error(describe_cap(cap, reached, dt_total, mu_f)),
      cap_(cap),
      reached_(reached),
      mu_f_(mu_f) {}

CollisionKernel::CollisionKernel(const AngularGrid& grid, const CollisionParams& params)
    : grid_(&grid), params_(params), ratio_(grid.size()), rate_(grid.size()) {
  params_.validate();
  w_.node.resize(grid.size());
  w_.half.resize(grid.size());
}

double CollisionKernel::refresh(std::span<const double> f) {
  const Moments m = moments(f, *grid_);
  const double mu_f = effective_mu(params_, m);
  // DFL with exactly zero flux has mu_f == 0 as well, so theta_bar is only
  // dereferenced when it exists.
  fill_weights(*grid_, m.theta_bar, mu_f, params_.sigma, w_);
  return cfl_collision(mu_f, params_.sigma, grid_->dtheta());
}

void CollisionKernel::euler(std::span<double> f, double dt) {
  apply_qn(f, w_, params_.sigma, *grid_, rate_);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] += dt * rate_[k];
}

void CollisionKernel::step(std::span<double> f, double dt) {
  const double limit = refresh(f);
  if (dt > limit * (1.0 + 1e-12)) throw CflViolation(dt, limit);
  euler(f, dt);
}

AdaptStats CollisionKernel::adapt(std::span<double> f, double dt_total, std::size_t substep_cap) {
  if (!(dt_total > 0.0)) throw std::invalid_argument("dt_total must be positive");
  AdaptStats stats;
  stats.min_substep = dt_total;
  double s = 0.0;
  while (true) {
    const double limit = refresh(f);
    stats.max_mu_f = std::max(stats.max_mu_f, w_.mu_f);
    if (stats.substeps == substep_cap) {
      throw SubstepCapExceeded(substep_cap, s, dt_total, w_.mu_f);
    }
    const double remaining = dt_total - s;
    const bool last = remaining <= limit;
    const double dt = last ? remaining : limit;
    euler(f, dt);
    ++stats.substeps;
    stats.elapsed += dt;
    stats.min_substep = std::min(stats.min_substep, dt);
    if (last) break;
    s += dt;
  }
  return stats;
}

AngularDistribution collision_step(std::span<const double> f, double dt,
                                   const CollisionParams& params, const AngularGrid& grid) {
  AngularDistribution out(f.begin(), f.end());
  CollisionKernel kernel(grid, params);
  kernel.step(out, dt);
  return out;
}

AngularDistribution collision_adapt(std::span<const double> f, double dt_total,
                                    const CollisionParams& params, const AngularGrid& grid,
                                    AdaptStats* stats, std::size_t substep_cap) {
  AngularDistribution out(f.begin(), f.end());
  CollisionKernel kernel(grid, params);
  const AdaptStats st = kernel.adapt(out, dt_total, substep_cap);
  if (stats) *stats = st;
  return out;
}

}  // namespace swarmkin
