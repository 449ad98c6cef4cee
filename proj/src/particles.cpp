#include "swarmkin/particles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

#include "swarmkin/random.hpp"

namespace swarmkin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double v, double length) noexcept {
  v -= length * std::floor(v / length);
  return v >= length ? 0.0 : v;
}

}  // namespace

void MicroParams::validate() const {
  if (n_particles == 0) throw std::invalid_argument("n_particles must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
  if (!(radius > 0.0) || !(radius < 0.5 * length)) {
    throw std::invalid_argument("radius must lie in (0, L/2)");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(mu >= 0.0) || !(sigma >= 0.0) || !(c >= 0.0)) {
    throw std::invalid_argument("mu, sigma and c must be non-negative");
  }
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(snapshot_every > 0.0)) throw std::invalid_argument("snapshot_every must be positive");
  if (!(profile_dx > 0.0)) throw std::invalid_argument("profile_dx must be positive");
}

ParticleState random_state(const MicroParams& p) {
  ParticleState s;
  s.x.resize(p.n_particles);
  s.y.resize(p.n_particles);
  s.theta.resize(p.n_particles);
  for (std::size_t i = 0; i < p.n_particles; ++i) {
    s.x[i] = wrap(p.length * rng::uniform(p.seed, 0, i, 1), p.length);
    s.y[i] = wrap(p.length * rng::uniform(p.seed, 0, i, 2), p.length);
    s.theta[i] = wrap(kTwoPi * rng::uniform(p.seed, 0, i, 3), kTwoPi);
  }
  return s;
}

double periodic_delta(double a, double b, double length) noexcept {
  double d = b - a;
  if (d > 0.5 * length) d -= length;
  else if (d < -0.5 * length) d += length;
  return d;
}

CellList::CellList(const ParticleState& s, double radius, double length) {
  // A hair wider than R so rounding at cell edges cannot hide a neighbour.
  auto n = static_cast<std::size_t>(std::floor(length / (radius * (1.0 + 1e-9))));
  if (n < 3) n = 1;
  n_ = n;
  width_ = length / static_cast<double>(n_);
  const std::size_t cells = n_ * n_;
  start_.assign(cells + 1, 0);
  std::vector<std::size_t> cell(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    cell[i] = cell_of(s.x[i]) * n_ + cell_of(s.y[i]);
    ++start_[cell[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
  items_.resize(s.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < s.size(); ++i) items_[fill[cell[i]]++] = i;
}

std::size_t CellList::cell_of(double v) const noexcept {
  const auto c = static_cast<std::size_t>(std::max(0.0, std::floor(v / width_)));
  return std::min(c, n_ - 1);
}

void CellList::candidates(double x, double y, std::vector<std::size_t>& out) const {
  out.clear();
  if (n_ == 1) {
    out.assign(items_.begin(), items_.end());
    return;
  }
  const std::size_t cx = cell_of(x), cy = cell_of(y);
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t ix = (cx + n_ - 1 + a) % n_;
    for (std::size_t b = 0; b < 3; ++b) {
      const std::size_t iy = (cy + n_ - 1 + b) % n_;
      const std::size_t c = ix * n_ + iy;
      out.insert(out.end(), items_.begin() + static_cast<std::ptrdiff_t>(start_[c]),
                 items_.begin() + static_cast<std::ptrdiff_t>(start_[c + 1]));
    }
  }
  std::sort(out.begin(), out.end());
}

std::array<double, 2> neighbor_flux(const ParticleState& s, std::size_t i, const MicroParams& p,
                                    const CellList& cells, std::vector<std::size_t>& scratch) {
  cells.candidates(s.x[i], s.y[i], scratch);
  const double r2 = p.radius * p.radius;
  double jx = 0.0, jy = 0.0;
  for (std::size_t j : scratch) {
    if (j == i && !p.include_self) continue;
    const double dx = periodic_delta(s.x[i], s.x[j], p.length);
    const double dy = periodic_delta(s.y[i], s.y[j], p.length);
    if (dx * dx + dy * dy <= r2) {
      jx += std::cos(s.theta[j]);
      jy += std::sin(s.theta[j]);
    }
  }
  return {jx, jy};
}

std::array<double, 2> neighbor_flux(const ParticleState& s, std::size_t i, const MicroParams& p) {
  const CellList cells(s, p.radius, p.length);
  std::vector<std::size_t> scratch;
  return neighbor_flux(s, i, p, cells, scratch);
}

std::vector<std::array<double, 2>> all_neighbor_fluxes(const ParticleState& s,
                                                       const MicroParams& p) {
  const CellList cells(s, p.radius, p.length);
  std::vector<std::array<double, 2>> out(s.size());
  const auto n = static_cast<std::ptrdiff_t>(s.size());
#pragma omp parallel
  {
    std::vector<std::size_t> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          neighbor_flux(s, static_cast<std::size_t>(i), p, cells, scratch);
    }
  }
  return out;
}

ParticleState step_particles(const ParticleState& s, const MicroParams& p) {
  const auto flux = all_neighbor_fluxes(s, p);
  ParticleState out;
  out.x.resize(s.size());
  out.y.resize(s.size());
  out.theta.resize(s.size());
  out.step = s.step + 1;
  out.time = static_cast<double>(out.step) * p.dt;
  const double noise_scale = std::sqrt(2.0 * p.sigma * p.dt);
  const auto n = static_cast<std::ptrdiff_t>(s.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto [jx, jy] = flux[i];
    const double ct = std::cos(s.theta[i]), st = std::sin(s.theta[i]);
    // |j| sin(θ̄ − θ) without forming θ̄.
    const double cross = jy * ct - jx * st;
    double drift = 0.0;
    if (p.model == ModelKind::DFL) {
      drift = p.mu * cross;
    } else {
      const double norm = std::hypot(jx, jy);
      if (norm > 0.0) drift = p.mu * cross / norm;
    }
    double theta = s.theta[i] + drift * p.dt;
    if (noise_scale > 0.0) theta += noise_scale * rng::normal(p.seed, s.step + 1, i);
    theta = wrap(theta, kTwoPi);
    out.theta[i] = theta;
    out.x[i] = wrap(s.x[i] + p.c * std::cos(theta) * p.dt, p.length);
    out.y[i] = wrap(s.y[i] + p.c * std::sin(theta) * p.dt, p.length);
  }
  return out;
}

BandProfile band_profile(const ParticleState& s, double dx, double length, Axis axis) {
  const double bins_real = length / dx;
  const auto bins = static_cast<std::size_t>(std::llround(bins_real));
  if (bins == 0 || std::abs(bins_real - static_cast<double>(bins)) > 1e-9 * bins_real) {
    throw std::invalid_argument("profile bin width must divide the domain length");
  }
  BandProfile prof;
  prof.x.resize(bins);
  prof.rho.assign(bins, 0.0);
  prof.rho_u.assign(bins, 0.0);
  prof.u.assign(bins, 0.0);
  prof.empty.assign(bins, true);
  const std::vector<double>& pos = axis == Axis::X ? s.x : s.y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto b = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, std::floor(pos[i] / dx))));
    prof.rho[b] += 1.0;
    prof.rho_u[b] += axis == Axis::X ? std::cos(s.theta[i]) : std::sin(s.theta[i]);
  }
  for (std::size_t b = 0; b < bins; ++b) {
    prof.x[b] = (static_cast<double>(b) + 0.5) * dx;
    prof.empty[b] = prof.rho[b] == 0.0;
    if (!prof.empty[b]) prof.u[b] = prof.rho_u[b] / prof.rho[b];
    prof.rho[b] /= dx;
    prof.rho_u[b] /= dx;
  }
  return prof;
}

NeighborStats avg_neighbors(const ParticleState& s, double radius, double length) {
  NeighborStats st;
  const auto n = static_cast<double>(s.size());
  st.homogeneous_estimate = std::numbers::pi * radius * radius * n / (length * length);
  if (s.size() == 0) return st;
  const CellList cells(s, radius, length);
  const double r2 = radius * radius;
  std::vector<std::size_t> scratch;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cells.candidates(s.x[i], s.y[i], scratch);
    for (std::size_t j : scratch) {
      if (j == i) continue;
      const double dx = periodic_delta(s.x[i], s.x[j], length);
      const double dy = periodic_delta(s.y[i], s.y[j], length);
      if (dx * dx + dy * dy <= r2) ++total;
    }
  }
  st.empirical = static_cast<double>(total) / n;
  return st;
}

double polar_order(const ParticleState& s) {
  if (s.size() == 0) return 0.0;
  double cx = 0.0, sy = 0.0;
  for (double t : s.theta) {
    cx += std::cos(t);
    sy += std::sin(t);
  }
  return std::hypot(cx, sy) / static_cast<double>(s.size());
}

void write_trajectory(const std::filesystem::path& path, const ParticleState& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trajectory file '" + path.string() + "'");
  out << std::setprecision(17) << "id,x,y,theta\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << i << ',' << s.x[i] << ',' << s.y[i] << ',' << s.theta[i] << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trajectory file '" + path.string() + "'");
}

void append_band_profile(const std::filesystem::path& path, double t, const BandProfile& prof) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open profile file '" + path.string() + "'");
  out << std::setprecision(17);
  if (fresh) out << "t,bin,rho_bar,u_bar\n";
  for (std::size_t b = 0; b < prof.rho.size(); ++b) {
    out << t << ',' << b << ',' << prof.rho[b] << ',' << prof.u[b] << '\n';
  }
  if (!out) throw std::runtime_error("failed writing profile file '" + path.string() + "'");
}

}  // namespace swarmkin
