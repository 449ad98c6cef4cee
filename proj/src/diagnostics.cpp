#include "swarmkin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace swarmkin {

namespace {

constexpr std::size_t kQuadratureNodes = 4096;

const AngularGrid& quadrature_grid() {
  static const AngularGrid grid(kQuadratureNodes);
  return grid;
}

double floored_log(double v, std::size_t& floored) {
  if (v < kEntropyFloor) {
    ++floored;
    v = kEntropyFloor;
  }
  return std::log(v);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " is not finite");
}

}  // namespace

FreeEnergyValue free_energy(std::span<const double> f, ModelKind model, double mu, double sigma,
                            const AngularGrid& grid) {
  FreeEnergyValue out;
  double s = 0.0;
  for (double v : f) {
    if (v == 0.0) continue;  // 0 ln 0 = 0
    s += v * floored_log(v, out.floored);
  }
  out.entropy_part = grid.dtheta() * s;
  const Moments m = moments(f, grid);
  out.interaction_part = model == ModelKind::Vicsek ? m.j_norm : 0.5 * m.j_norm * m.j_norm;
  out.total = out.entropy_part - (mu / sigma) * out.interaction_part;
  require_finite(out.total, "free energy");
  return out;
}

DissipationAudit dissipation_audit(std::span<const double> f, const VonMisesWeights& w,
                                   double sigma, const AngularGrid& grid) {
  const std::size_t n = grid.size();
  const AngularDistribution q = apply_qn(f, w, sigma, grid);
  DissipationAudit out;
  std::size_t floored = 0;
  for (std::size_t k = 0; k < n; ++k) {
    out.l2_rate += q[k] * f[k] / w.node[k];
    out.entropy_rate += q[k] * (floored_log(f[k], floored) - std::log(w.node[k]));
  }
  // S_ab = (Q e_a)_b / M_b, the 1/M inner product of Q e_a with e_b
  std::vector<double> columns(n * n);
  std::vector<double> basis(n, 0.0), image(n);
  for (std::size_t a = 0; a < n; ++a) {
    basis[a] = 1.0;
    apply_qn(basis, w, sigma, grid, image);
    for (std::size_t b = 0; b < n; ++b) columns[a * n + b] = image[b] / w.node[b];
    basis[a] = 0.0;
  }
  double scale = 0.0, defect = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      scale = std::max(scale, std::abs(columns[a * n + b]));
      defect = std::max(defect, std::abs(columns[a * n + b] - columns[b * n + a]));
    }
  }
  out.symmetry_defect = scale > 0.0 ? defect / scale : 0.0;
  return out;
}

DissipationAudit dissipation_audit(std::span<const double> f, const CollisionParams& params,
                                   const AngularGrid& grid) {
  const Moments m = moments(f, grid);
  const VonMisesWeights w =
      von_mises_weights(grid, m.theta_bar, effective_mu(params, m), params.sigma);
  return dissipation_audit(f, w, params.sigma, grid);
}

double von_mises_mean_cosine(double a) {
  const AngularGrid& g = quadrature_grid();
  double num = 0.0, den = 0.0;
  if (std::abs(a) < 50.0) {
    // Σ cos θ_k vanishes exactly in exact arithmetic; subtracting it via
    // expm1 removes its round-off, which would swamp small a.
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double c = g.cos_node(k);
      num += c * std::expm1(a * c);
      den += std::exp(a * c);
    }
  } else {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double c = g.cos_node(k);
      const double e = std::exp(a * (c - 1.0));
      num += c * e;
      den += e;
    }
  }
  return num / den;
}

double von_mises_log_partition(double a) {
  const AngularGrid& g = quadrature_grid();
  const double shift = std::abs(a);
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += std::exp(a * g.cos_node(k) - shift);
  return shift + std::log(g.dtheta() * s);
}

double compatibility_residual(double kappa, double rho_bar, double mu, double sigma) {
  return 2.0 * std::numbers::pi * rho_bar * von_mises_mean_cosine(mu * kappa / sigma) - kappa;
}

KappaSolution solve_kappa(double rho_bar, double mu, double sigma) {
  if (!(rho_bar > 0.0) || !(mu > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("solve_kappa needs positive rho_bar, mu and sigma");
  }
  KappaSolution out;
  out.threshold_sigma = std::numbers::pi * mu * rho_bar;
  if (sigma >= out.threshold_sigma) {
    out.branch = KappaBranch::Zero;
    out.kappa = 0.0;
    out.residual = 0.0;
    return out;
  }
  auto g = [&](double k) { return compatibility_residual(k, rho_bar, mu, sigma); };
  double hi = 2.0 * std::numbers::pi * rho_bar;
  double lo = 1e-3 * hi;
  while (!(g(lo) > 0.0)) {
    lo *= 0.1;
    if (lo < 1e-300) {
      throw std::runtime_error("solve_kappa: no positive bracket below the threshold");
    }
  }
  if (!(g(hi) < 0.0)) throw std::runtime_error("solve_kappa: upper bracket has wrong sign");
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  const double r_lo = std::abs(g(lo));
  const double r_hi = std::abs(g(hi));
  out.kappa = r_lo <= r_hi ? lo : hi;
  out.residual = std::min(r_lo, r_hi);
  out.branch = KappaBranch::Positive;
  return out;
}

std::vector<VonMisesEntropyPoint> von_mises_entropy_curve(std::span<const double> concentrations) {
  std::vector<VonMisesEntropyPoint> out;
  out.reserve(concentrations.size());
  for (double a : concentrations) {
    VonMisesEntropyPoint p;
    p.concentration = a;
    p.j_norm = von_mises_mean_cosine(a);
    // M = e^{a cos θ}/Z:  ∫ M ln M = a <cos> - ln Z
    p.entropy = a * p.j_norm - von_mises_log_partition(a);
    out.push_back(p);
  }
  return out;
}

namespace {

double field_rho_bar(const DistributionField& field) {
  const double l = field.grid().length;
  return field.total_mass() / (2.0 * std::numbers::pi * l * l);
}

}  // namespace

double entropy_uniform(const DistributionField& field, std::size_t* floored) {
  const double rho_bar = field_rho_bar(field);
  const double log_ref = std::log(rho_bar);
  std::size_t hits = 0;
  double s = 0.0;
  for (double v : field.values()) s += v * (floored_log(v, hits) - log_ref);
  const SpatialGrid& g = field.grid();
  const double e = g.dx() * g.dy() * field.agrid().dtheta() * s;
  if (floored) *floored += hits;
  require_finite(e, "E_u");
  return e;
}

std::vector<double> vonmises_reference(const AngularGrid& grid, double rho_bar, double mu,
                                       double sigma, double kappa) {
  std::vector<double> out(grid.size(), rho_bar);
  if (kappa == 0.0) return out;
  const double a = mu * kappa / sigma;
  const double log_z = von_mises_log_partition(a);
  const double log_mass = std::log(2.0 * std::numbers::pi * rho_bar);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out[k] = std::exp(log_mass + a * grid.cos_node(k) - log_z);
  }
  return out;
}

double entropy_vonmises(const DistributionField& field, double mu, double sigma,
                        std::optional<double> kappa, std::size_t* floored) {
  const double rho_bar = field_rho_bar(field);
  const double kap = kappa ? *kappa : solve_kappa(rho_bar, mu, sigma).kappa;
  if (kap == 0.0) return entropy_uniform(field, floored);
  const AngularGrid& ag = field.agrid();
  const double a = mu * kap / sigma;
  const double log_z = von_mises_log_partition(a);
  const double log_mass = std::log(2.0 * std::numbers::pi * rho_bar);
  std::vector<double> log_ref(ag.size());
  for (std::size_t k = 0; k < ag.size(); ++k) log_ref[k] = log_mass + a * ag.cos_node(k) - log_z;
  std::size_t hits = 0;
  double s = 0.0;
  const auto values = field.values();
  const std::size_t n = ag.size();
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    const double v = values[idx];
    s += v * (floored_log(v, hits) - log_ref[idx % n]);
  }
  const SpatialGrid& g = field.grid();
  const double e = g.dx() * g.dy() * ag.dtheta() * s;
  if (floored) *floored += hits;
  require_finite(e, "E_VM");
  return e;
}

double fit_loglog_slope(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size() || h.size() < 2) {
    throw std::invalid_argument("slope fit needs matching arrays of at least two points");
  }
  const double n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) {
      throw std::invalid_argument("slope fit needs positive abscissae and errors");
    }
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AccuracyResult accuracy_order(std::span<const ResolutionSample> family,
                              const ResolutionSample& reference) {
  if (family.size() < 3) throw std::invalid_argument("accuracy_order needs at least three resolutions");
  const std::size_t n_ref = reference.f.size();
  if (n_ref == 0) throw std::invalid_argument("empty reference solution");
  AccuracyResult out;
  for (const ResolutionSample& s : family) {
    const std::size_t n = s.f.size();
    if (n == 0 || n >= n_ref || n_ref % n != 0) {
      throw std::invalid_argument("accuracy_order: grid of " + std::to_string(n) +
                                  " nodes is not nested in the reference of " +
                                  std::to_string(n_ref));
    }
    const double expected = 2.0 * std::numbers::pi / static_cast<double>(n);
    if (std::abs(s.dtheta - expected) > 1e-12 * expected) {
      throw std::invalid_argument("accuracy_order: dtheta does not match the sample size");
    }
    const std::size_t stride = n_ref / n;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = s.f[k] - reference.f[k * stride];
      sum += d * d;
    }
    out.dtheta.push_back(s.dtheta);
    out.l2_error.push_back(std::sqrt(s.dtheta * sum));
  }
  out.slope = fit_loglog_slope(out.dtheta, out.l2_error);
  return out;
}

PeriodEstimate dominant_period(std::span<const double> times, std::span<const double> values,
                               double window_fraction, double min_prominence) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  PeriodEstimate out;
  const std::size_t n = values.size();
  if (n < 3) return out;
  const double t_start = times.back() - window_fraction * (times.back() - times.front());
  std::size_t first = 0;
  while (first < n && times[first] < t_start) ++first;
  if (n - first < 3) return out;
  const auto lo_it = std::min_element(values.begin() + first, values.end());
  const auto hi_it = std::max_element(values.begin() + first, values.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 0.0)) return out;
  const double threshold = min_prominence * range;

  for (std::size_t i = first + 1; i + 1 < n; ++i) {
    // plateau-aware local maximum: strictly above the left, not below the right
    if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
    std::size_t r = i;
    while (r + 1 < n && values[r + 1] == values[i]) ++r;
    if (r + 1 >= n || values[r + 1] > values[i]) continue;
    // prominence: descend on each side until a higher sample or the window edge
    double left_min = values[i];
    for (std::size_t l = i; l-- > first;) {
      if (values[l] > values[i]) break;
      left_min = std::min(left_min, values[l]);
    }
    double right_min = values[i];
    for (std::size_t q = r + 1; q < n; ++q) {
      if (values[q] > values[i]) break;
      right_min = std::min(right_min, values[q]);
    }
    const double prominence = values[i] - std::max(left_min, right_min);
    if (prominence >= threshold) out.peak_times.push_back(0.5 * (times[i] + times[r]));
    i = r;
  }
  if (out.peak_times.size() < 3) return out;
  std::vector<double> spacing;
  for (std::size_t i = 1; i < out.peak_times.size(); ++i) {
    spacing.push_back(out.peak_times[i] - out.peak_times[i - 1]);
  }
  const double mean = std::accumulate(spacing.begin(), spacing.end(), 0.0) /
                      static_cast<double>(spacing.size());
  const auto [mn, mx] = std::minmax_element(spacing.begin(), spacing.end());
  out.period = mean;
  out.spacing_variation = (*mx - *mn) / mean;
  return out;
}

MaxRhoAnalysis max_rho_series(const RunRecord& record, double min_prominence) {
  MaxRhoAnalysis out;
  out.times.reserve(record.series.size());
  out.max_rho.reserve(record.series.size());
  for (const SeriesRow& row : record.series) {
    out.times.push_back(row.t);
    out.max_rho.push_back(row.max_rho);
  }
  out.period = dominant_period(out.times, out.max_rho, 1.0 / 3.0, min_prominence);
  return out;
}

double equilibrium_gap(std::span<const double> f, const CollisionParams& params,
                       const AngularGrid& grid) {
  const Moments m = moments(f, grid);
  double a = 0.0;
  if (params.model == ModelKind::Vicsek) {
    a = params.mu / params.sigma;
  } else {
    const double kappa = solve_kappa(m.rho / (2.0 * std::numbers::pi), params.mu, params.sigma).kappa;
    a = params.mu * kappa / params.sigma;
  }
  const double theta_bar = m.theta_bar.value_or(0.0);
  const double cb = std::cos(theta_bar), sb = std::sin(theta_bar);
  std::vector<double> ref(grid.size());
  double ref_sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ref[k] = std::exp(a * (grid.cos_node(k) * cb + grid.sin_node(k) * sb - 1.0));
    ref_sum += ref[k];
  }
  const double scale = m.rho / (grid.dtheta() * ref_sum);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = f[k] - scale * ref[k];
    sum += d * d;
  }
  return std::sqrt(grid.dtheta() * sum);
}

}  // namespace swarmkin
