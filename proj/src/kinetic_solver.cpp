#include "swarmkin/kinetic_solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swarmkin/diagnostics.hpp"
#include "swarmkin/io.hpp"
#include "swarmkin/random.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swarmkin {

namespace {

constexpr std::array<int, 5> kPrimeModes = {1, 2, 3, 5, 7};

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Random: return "random";
    case InitKind::HomogeneousBand: return "band";
    case InitKind::Smooth19: return "smooth";
    case InitKind::UniformVonMises: return "vonmises";
  }
  return "random";
}

InitKind parse_init_kind(const std::string& text) {
  const std::string s = lowercase(text);
  if (s == "random") return InitKind::Random;
  if (s == "band" || s == "homogeneous-band") return InitKind::HomogeneousBand;
  if (s == "smooth" || s == "smooth19") return InitKind::Smooth19;
  if (s == "vonmises" || s == "uniform-vonmises") return InitKind::UniformVonMises;
  throw std::invalid_argument("unknown init kind '" + text + "'");
}

SpatialGrid SolverConfig::spatial_grid() const {
  return make_spatial_grid(length, m_x, pseudo_1d ? 1 : m_y, pseudo_1d);
}

double SolverConfig::time_step() const {
  const SpatialGrid g = spatial_grid();
  const double h = pseudo_1d ? g.dx() : std::min(g.dx(), g.dy());
  return transport_cfl_factor * cfl_transport(c, h);
}

void SolverConfig::validate() const {
  collision().validate();
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
  if (m_x < 1 || (!pseudo_1d && m_y < 1)) throw std::invalid_argument("m_x and m_y must be >= 1");
  if (n_theta < 3) throw std::invalid_argument("n_theta must be >= 3");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(transport_cfl_factor > 0.0 && transport_cfl_factor <= 1.0)) {
    throw std::invalid_argument("transport_cfl_factor must lie in (0, 1]");
  }
  if (!(snapshot_every > 0.0) || snapshot_every > t_end) {
    throw std::invalid_argument("snapshot_every must lie in (0, t_end]");
  }
  if (!(diag_every > 0.0)) throw std::invalid_argument("diag_every must be positive");
  if (substep_cap < 1) throw std::invalid_argument("substep_cap must be >= 1");
}

double smooth19(double theta) {
  const double s = theta / (2.0 * std::numbers::pi);
  const double s8 = std::pow(s, 8);
  return (1.1 + std::cos(4.0 * theta)) * std::exp(-std::cos(std::numbers::pi * (s + s8)));
}

double prime_cosine(double theta, double rho) {
  double sum = 0.0;
  for (int p : kPrimeModes) sum += std::cos(p * theta);
  return rho * (1.0 + 0.2 * sum);
}

double homogeneous_band(double x, double theta, double mean_rho, double length) {
  double sum = 0.0;
  for (int p : kPrimeModes) {
    sum += std::cos(p * theta) + std::cos(2.0 * p * std::numbers::pi * x / length);
  }
  return mean_rho * (1.0 + 0.1 * sum);
}

DistributionField init_field(const SolverConfig& cfg) {
  cfg.validate();
  const SpatialGrid g = cfg.spatial_grid();
  const AngularGrid ag(cfg.n_theta);
  DistributionField field(g, ag);
  const InitSpec& init = cfg.init;
  const std::size_t n = ag.size();

  switch (init.kind) {
    case InitKind::Random: {
      if (!(init.amplitude >= 0.0 && init.amplitude < 1.0)) {
        throw std::invalid_argument("random init amplitude must lie in [0, 1)");
      }
      if (!(init.mean_rho > 0.0)) throw std::invalid_argument("random init mean_rho must be positive");
      for (std::size_t i = 0; i < g.m_x; ++i)
        for (std::size_t j = 0; j < g.m_y; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            const double u = 2.0 * rng::uniform(cfg.seed, i, j, k) - 1.0;
            field(i, j, k) = init.mean_rho * (1.0 + init.amplitude * u);
          }
      break;
    }
    case InitKind::HomogeneousBand: {
      if (!(init.mean_rho > 0.0)) throw std::invalid_argument("band init mean_rho must be positive");
      for (std::size_t i = 0; i < g.m_x; ++i) {
        const double x = static_cast<double>(i) * g.dx();
        for (std::size_t j = 0; j < g.m_y; ++j)
          for (std::size_t k = 0; k < n; ++k)
            field(i, j, k) = homogeneous_band(x, ag.theta(k), init.mean_rho, g.length);
      }
      break;
    }
    case InitKind::Smooth19: {
      for (std::size_t i = 0; i < g.m_x; ++i)
        for (std::size_t j = 0; j < g.m_y; ++j)
          for (std::size_t k = 0; k < n; ++k) field(i, j, k) = smooth19(ag.theta(k));
      break;
    }
    case InitKind::UniformVonMises: {
      if (!(init.mean_rho > 0.0)) throw std::invalid_argument("von Mises init mean_rho must be positive");
      if (!(init.kappa >= 0.0)) throw std::invalid_argument("von Mises init kappa must be >= 0");
      std::vector<double> profile(n);
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        profile[k] = std::exp(init.kappa * (std::cos(ag.theta(k) - init.angle) - 1.0));
        sum += profile[k];
      }
      // angular mass 2π·mean_rho per cell
      const double scale = 2.0 * std::numbers::pi * init.mean_rho / (ag.dtheta() * sum);
      for (std::size_t i = 0; i < g.m_x; ++i)
        for (std::size_t j = 0; j < g.m_y; ++j)
          for (std::size_t k = 0; k < n; ++k) field(i, j, k) = scale * profile[k];
      break;
    }
  }
  if (!(field.min_value() > 0.0)) {
    throw std::invalid_argument("initial condition '" + to_string(init.kind) +
                                "' is not strictly positive");
  }
  return field;
}

DensityFlux density_and_flux(const DistributionField& field) {
  const SpatialGrid& g = field.grid();
  const AngularGrid& ag = field.agrid();
  DensityFlux out;
  out.rho.resize(g.cells());
  out.jx.resize(g.cells());
  out.jy.resize(g.cells());
  double total = 0.0;
  for (std::size_t i = 0; i < g.m_x; ++i) {
    for (std::size_t j = 0; j < g.m_y; ++j) {
      const Moments m = moments(field.cell(i, j), ag);
      const std::size_t c = i * g.m_y + j;
      out.rho[c] = m.rho;
      out.jx[c] = m.jx;
      out.jy[c] = m.jy;
      total += m.rho;
    }
  }
  out.mass = g.dx() * g.dy() * total;
  out.rho_bar = out.mass / (2.0 * std::numbers::pi * g.length * g.length);
  return out;
}

KineticSolver::KineticSolver(const SolverConfig& cfg) : KineticSolver(cfg, init_field(cfg)) {}

KineticSolver::KineticSolver(const SolverConfig& cfg, DistributionField initial)
    : cfg_(cfg),
      agrid_(cfg.n_theta),
      field_(std::move(initial)),
      next_(field_.grid(), field_.agrid()),
      scratch_(field_.grid(), field_.agrid()),
      dt_(cfg.time_step()) {
  cfg_.validate();
  if (field_.agrid().size() != cfg_.n_theta || field_.grid().m_x != cfg_.m_x ||
      field_.grid().pseudo_1d != cfg_.pseudo_1d) {
    throw std::invalid_argument("initial field does not match the solver configuration");
  }
}

void KineticSolver::step() {
  transport_step(field_, next_, scratch_, dt_, cfg_.c);

  const SpatialGrid& g = next_.grid();
  const std::size_t cells = g.cells();
  const CollisionParams params = cfg_.collision();
  std::atomic<bool> failed{false};
  std::size_t max_sub = 0;
  std::mutex failure_mutex;
  std::optional<SubstepCapExceeded> first_error;

#ifdef _OPENMP
#pragma omp parallel reduction(max : max_sub)
#endif
  {
    CollisionKernel kernel(agrid_, params);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 16)
#endif
    for (std::size_t c = 0; c < cells; ++c) {
      if (failed.load(std::memory_order_relaxed)) continue;
      const std::size_t i = c / g.m_y, j = c % g.m_y;
      try {
        const AdaptStats st = kernel.adapt(next_.cell(i, j), dt_, cfg_.substep_cap);
        max_sub = std::max(max_sub, st.substeps);
      } catch (const SubstepCapExceeded& e) {
        std::lock_guard lock(failure_mutex);
        if (!first_error) first_error.emplace(e);
        failed.store(true);
      }
    }
  }
  if (first_error) throw *first_error;
  max_substeps_ = max_sub;
  std::swap(field_, next_);
  ++steps_;
}

SeriesRow diagnose(const DistributionField& field, double t, double mu, double sigma,
                   std::optional<double> kappa, std::size_t* floored) {
  const DensityFlux df = density_and_flux(field);
  SeriesRow row;
  row.t = t;
  row.mass = df.mass;
  row.rho_bar = df.rho_bar;
  row.max_rho = *std::max_element(df.rho.begin(), df.rho.end());
  row.e_u = entropy_uniform(field, floored);
  row.e_vm = entropy_vonmises(field, mu, sigma, kappa, floored);
  const SpatialGrid& g = field.grid();
  double jx = 0.0, jy = 0.0;
  for (std::size_t c = 0; c < df.jx.size(); ++c) {
    jx += df.jx[c];
    jy += df.jy[c];
  }
  // spatial mean flux vector
  const double area = g.length * g.length;
  row.j_global = std::hypot(jx, jy) * g.dx() * g.dy() / area;
  return row;
}

RunRecord run(const SolverConfig& cfg, const RunOptions& options) {
  return run(cfg, init_field(cfg), options);
}

RunRecord run(const SolverConfig& cfg, DistributionField initial, const RunOptions& options) {
  KineticSolver solver(cfg, std::move(initial));
  RunRecord record;
  const double dt = solver.dt();
  const double eps = 1e-9 * dt;
  const auto total_steps = static_cast<std::uint64_t>(std::ceil(cfg.t_end / dt - 1e-9));

  const double rho_bar = density_and_flux(solver.field()).rho_bar;
  const double kappa = solve_kappa(rho_bar, cfg.mu, cfg.sigma).kappa;

  std::optional<SeriesWriter> series_out;
  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir / "snapshots");
    series_out.emplace(*options.out_dir / "series.csv");
  }

  auto emit_diag = [&]() {
    const SeriesRow row =
        diagnose(solver.field(), solver.time(), cfg.mu, cfg.sigma, kappa, &record.entropy_floor_hits);
    record.times.push_back(row.t);
    record.series.push_back(row);
    if (series_out) series_out->write(row);
    if (options.on_diag) options.on_diag(solver, row);
  };
  auto emit_snapshot = [&]() {
    if (!options.out_dir) return;
    const auto path = *options.out_dir / "snapshots" /
                      snapshot_file_name(record.snapshots.size());
    write_snapshot(path, solver.field(), solver.time(),
                   SnapshotMeta{cfg.model, cfg.mu, cfg.sigma, cfg.c}, cfg.snapshot_format);
    record.snapshot_times.push_back(solver.time());
    record.snapshots.push_back(path);
  };

  emit_diag();
  emit_snapshot();
  // schedules in simulation time, k·every for k = 1, 2, ...
  std::uint64_t diag_index = 1, snap_index = 1;
  bool diag_current = true, snap_current = true;

  while (solver.steps() < total_steps) {
    try {
      solver.step();
    } catch (const SubstepCapExceeded& e) {
      record.aborted = true;
      record.abort_reason = e.what();
      break;
    }
    diag_current = snap_current = false;
    const double t = solver.time();
    if (t >= static_cast<double>(diag_index) * cfg.diag_every - eps) {
      emit_diag();
      diag_current = true;
      while (static_cast<double>(diag_index) * cfg.diag_every <= t + eps) ++diag_index;
    }
    if (t >= static_cast<double>(snap_index) * cfg.snapshot_every - eps) {
      emit_snapshot();
      snap_current = true;
      while (static_cast<double>(snap_index) * cfg.snapshot_every <= t + eps) ++snap_index;
    }
  }
  if (!diag_current) emit_diag();
  if (!snap_current) emit_snapshot();
  record.steps = solver.steps();
  record.final_time = solver.time();
  return record;
}

}  // namespace swarmkin
