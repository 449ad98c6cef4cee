#include "swarmkin/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

#include "swarmkin/random.hpp"

namespace swarmkin::experiments {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
}

double max_abs_diff_shared(std::span<const double> coarse, std::span<const double> fine) {
  const std::size_t ratio = fine.size() / coarse.size();
  double m = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    m = std::max(m, std::abs(coarse[k] - fine[k * ratio]));
  }
  return m;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  return out;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

bool on_schedule(double t, double every, double tol) {
  const double k = std::round(t / every);
  return k >= 0.0 && std::abs(k * every - t) <= tol;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "accuracy-order",   "homogeneous-relaxation", "adaptive-vs-standard",
      "vicsek-2d-longtime", "vicsek-2d-longtime-1000", "dfl-band-2d",
      "dfl-band-pseudo1d", "phase-diagram",          "micro-band",
      "micro-band-full"};
  return names;
}

bool is_preset(const std::string& name) {
  const auto& n = preset_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

AngularDistribution sample(const AngularGrid& grid, const std::function<double(double)>& profile) {
  AngularDistribution f(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) f[k] = profile(grid.theta(k));
  return f;
}

HomogeneousTrace run_homogeneous_fixed(AngularDistribution f, const CollisionParams& params,
                                       const AngularGrid& grid, double t_end, double dt,
                                       std::size_t stride) {
  CollisionKernel kernel(grid, params);
  HomogeneousTrace trace;
  const std::size_t steps = step_count(t_end, dt);
  const bool sampling = stride > 0;
  if (sampling) {
    trace.times.push_back(0.0);
    trace.samples.push_back(f);
  }
  for (std::size_t n = 1; n <= steps; ++n) {
    // the last step is shortened so the run ends exactly at t_end
    const double h = n < steps ? dt : t_end - static_cast<double>(steps - 1) * dt;
    kernel.step(f, h);
    ++trace.substeps;
    if (sampling && (n % stride == 0 || n == steps)) {
      trace.times.push_back(n < steps ? static_cast<double>(n) * dt : t_end);
      trace.samples.push_back(f);
    }
  }
  trace.final_f = std::move(f);
  return trace;
}

HomogeneousTrace run_homogeneous_adaptive(AngularDistribution f, const CollisionParams& params,
                                          const AngularGrid& grid, double t_end, double window,
                                          std::size_t cap) {
  CollisionKernel kernel(grid, params);
  HomogeneousTrace trace;
  trace.times.push_back(0.0);
  trace.samples.push_back(f);
  const std::size_t windows = step_count(t_end, window);
  for (std::size_t n = 1; n <= windows; ++n) {
    trace.substeps += kernel.adapt(f, window, cap).substeps;
    trace.times.push_back(static_cast<double>(n) * window);
    trace.samples.push_back(f);
  }
  trace.final_f = std::move(f);
  return trace;
}

AccuracyReport accuracy_order_experiment(const AccuracyConfig& cfg) {
  const CollisionParams params{cfg.model, cfg.mu, cfg.sigma};
  params.validate();
  auto final_at = [&](std::size_t n) {
    const AngularGrid grid(n);
    return ResolutionSample{grid.dtheta(),
                            run_homogeneous_fixed(sample(grid, smooth19), params, grid, cfg.t_end,
                                                  cfg.dt)
                                .final_f};
  };
  AccuracyReport report;
  report.n_thetas = cfg.n_thetas;
  std::vector<ResolutionSample> family;
  for (std::size_t n : cfg.n_thetas) family.push_back(final_at(n));
  const ResolutionSample reference = final_at(cfg.n_reference);
  report.fit = accuracy_order(family, reference);
  report.initial_reference = sample(AngularGrid(cfg.n_reference), smooth19);
  report.final_reference = reference.f;
  return report;
}

RelaxationReport relaxation_experiment(const RelaxationConfig& cfg) {
  const CollisionParams params{cfg.model, cfg.mu, cfg.sigma};
  params.validate();
  const AngularGrid grid(cfg.n_theta);
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(cfg.sample_every / cfg.dt)));
  const HomogeneousTrace trace =
      run_homogeneous_fixed(sample(grid, smooth19), params, grid, cfg.t_end, cfg.dt, stride);
  RelaxationReport report;
  report.times = trace.times;
  for (const auto& f : trace.samples) {
    report.free_energy.push_back(free_energy(f, cfg.model, cfg.mu, cfg.sigma, grid));
    report.gap.push_back(equilibrium_gap(f, params, grid));
  }
  for (std::size_t n = 1; n < report.free_energy.size(); ++n) {
    const double prev = report.free_energy[n - 1].total;
    const double rise = (report.free_energy[n].total - prev) / std::max(std::abs(prev), 1e-300);
    if (rise > report.worst_relative_rise) report.worst_relative_rise = rise;
    if (rise > 1e-12 && report.first_increase == 0) report.first_increase = n;
  }
  std::vector<double> t_half, log_gap;
  const std::size_t start = report.times.size() / 2;
  for (std::size_t n = start; n < report.times.size(); ++n) {
    t_half.push_back(report.times[n]);
    log_gap.push_back(std::log(report.gap[n]));
  }
  if (t_half.size() >= 2) {
    const LineFit fit = fit_line(t_half, log_gap);
    report.log_gap_slope = fit.slope;
    report.log_gap_r2 = fit.r2;
  }
  return report;
}

AdaptiveReport adaptive_vs_standard(const AdaptiveConfig& cfg) {
  const CollisionParams params{ModelKind::Vicsek, cfg.mu, cfg.sigma};
  params.validate();
  const double rho = cfg.rho;
  auto initial = [rho](double th) { return prime_cosine(th, rho); };

  AdaptiveReport report;
  const AngularGrid ref_grid(cfg.n_reference);
  report.standard_dt = cfg.standard_dt > 0.0
                           ? cfg.standard_dt
                           : cfl_collision(cfg.mu, cfg.sigma, ref_grid.dtheta());
  const AngularDistribution reference =
      run_homogeneous_fixed(sample(ref_grid, initial), params, ref_grid, cfg.t_end,
                            report.standard_dt)
          .final_f;

  using clock = std::chrono::steady_clock;
  auto seconds_min = [&](auto&& fn) {
    double best = 0.0;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, cfg.timing_repeats); ++r) {
      const auto t0 = clock::now();
      fn();
      const double s = std::chrono::duration<double>(clock::now() - t0).count();
      best = r == 0 ? s : std::min(best, s);
    }
    return best;
  };

  for (std::size_t n : cfg.n_thetas) {
    const AngularGrid grid(n);
    const AngularDistribution f0 = sample(grid, initial);
    AdaptiveRow row;
    row.n_theta = n;
    HomogeneousTrace standard, adaptive;
    row.standard_seconds = seconds_min([&] {
      standard = run_homogeneous_fixed(f0, params, grid, cfg.t_end, report.standard_dt);
    });
    row.adaptive_seconds = seconds_min([&] {
      adaptive = run_homogeneous_adaptive(f0, params, grid, cfg.t_end, cfg.window);
    });
    row.standard_steps = standard.substeps;
    row.adaptive_substeps = adaptive.substeps;
    row.standard_error = max_abs_diff_shared(standard.final_f, reference);
    row.adaptive_error = max_abs_diff_shared(adaptive.final_f, reference);
    for (std::size_t k = 0; k < n; ++k) {
      row.difference = std::max(row.difference, std::abs(standard.final_f[k] - adaptive.final_f[k]));
    }
    report.rows.push_back(row);
  }
  return report;
}

PhaseProbeReport homogeneous_phase_probe(const PhaseProbeConfig& cfg) {
  const CollisionParams params{ModelKind::DFL, cfg.mu, cfg.sigma};
  params.validate();
  const AngularGrid grid(cfg.n_theta);
  AngularDistribution f(cfg.n_theta);
  for (std::size_t k = 0; k < cfg.n_theta; ++k) {
    f[k] = cfg.rho_bar * (1.0 + cfg.amplitude * (2.0 * rng::uniform(cfg.seed, k) - 1.0));
  }
  const HomogeneousTrace trace = run_homogeneous_adaptive(f, params, grid, cfg.t_end, cfg.window);
  PhaseProbeReport report;
  report.final_f = trace.final_f;
  const Moments m = moments(report.final_f, grid);
  report.mass = m.rho;
  report.j_norm = m.j_norm;
  // ρ̄ of a homogeneous state: angular mass over 2π.
  report.kappa = solve_kappa(m.rho / kTwoPi, cfg.mu, cfg.sigma);
  const double level = m.rho / kTwoPi;
  for (double v : report.final_f) {
    report.sup_deviation_from_uniform = std::max(report.sup_deviation_from_uniform, std::abs(v - level));
  }
  return report;
}

SolverConfig solver_preset(const std::string& name) {
  SolverConfig cfg;
  cfg.mu = 1.0;
  cfg.sigma = 0.2;
  cfg.c = 1.0;
  cfg.length = 10.0;
  cfg.m_x = cfg.m_y = 100;
  cfg.n_theta = 30;
  cfg.seed = 1;
  if (name == "vicsek-2d-longtime" || name == "vicsek-2d-longtime-1000") {
    cfg.model = ModelKind::Vicsek;
    cfg.init.kind = InitKind::Random;
    cfg.init.amplitude = 0.5;
    cfg.init.mean_rho = 0.0763;
    cfg.t_end = name == "vicsek-2d-longtime" ? 200.0 : 1000.0;
    cfg.diag_every = 1.0;
    cfg.snapshot_every = 50.0;
  } else if (name == "dfl-band-2d") {
    cfg.model = ModelKind::DFL;
    cfg.init.kind = InitKind::HomogeneousBand;
    cfg.init.mean_rho = 0.0763;
    cfg.t_end = 1000.0;
    cfg.diag_every = 1.0;
    cfg.snapshot_every = 50.0;
  } else if (name == "dfl-band-pseudo1d") {
    cfg.model = ModelKind::DFL;
    cfg.pseudo_1d = true;
    cfg.m_y = 1;
    cfg.init.kind = InitKind::HomogeneousBand;
    cfg.init.mean_rho = 0.0763;
    cfg.t_end = 1000.0;
    cfg.diag_every = 0.1;
    cfg.snapshot_every = 25.0;
  } else if (name == "phase-diagram") {
    cfg.model = ModelKind::DFL;
    cfg.pseudo_1d = true;
    cfg.m_x = 50;
    cfg.m_y = 1;
    cfg.init.kind = InitKind::Random;
    cfg.init.amplitude = 0.5;
    cfg.t_end = 100.0;
    cfg.diag_every = 100.0;
    cfg.snapshot_every = 100.0;
  } else {
    throw UnknownPreset("unknown kinetic preset '" + name + "'");
  }
  return cfg;
}

SpatialStats spatial_stats(const DistributionField& field, double t) {
  const DensityFlux df = density_and_flux(field);
  SpatialStats st;
  st.t = t;
  const auto n = static_cast<double>(df.rho.size());
  st.rho_mean = std::accumulate(df.rho.begin(), df.rho.end(), 0.0) / n;
  st.rho_max = *std::max_element(df.rho.begin(), df.rho.end());
  st.rho_min = *std::min_element(df.rho.begin(), df.rho.end());
  double ss = 0.0;
  for (double r : df.rho) ss += (r - st.rho_mean) * (r - st.rho_mean);
  st.rho_std = std::sqrt(ss / n);
  return st;
}

XProfile x_profile(const DistributionField& field) {
  const DensityFlux df = density_and_flux(field);
  const SpatialGrid& g = field.grid();
  XProfile p;
  p.x.resize(g.m_x);
  p.rho.assign(g.m_x, 0.0);
  p.jx.assign(g.m_x, 0.0);
  p.jy.assign(g.m_x, 0.0);
  for (std::size_t i = 0; i < g.m_x; ++i) {
    p.x[i] = (static_cast<double>(i) + 0.5) * g.dx();
    for (std::size_t j = 0; j < g.m_y; ++j) {
      const std::size_t c = i * g.m_y + j;
      p.rho[i] += df.rho[c];
      p.jx[i] += df.jx[c];
      p.jy[i] += df.jy[c];
    }
    p.rho[i] /= static_cast<double>(g.m_y);
    p.jx[i] /= static_cast<double>(g.m_y);
    p.jy[i] /= static_cast<double>(g.m_y);
  }
  return p;
}

KineticReport run_kinetic(const SolverConfig& cfg, const std::optional<std::filesystem::path>& out_dir) {
  cfg.validate();
  KineticReport report;
  std::optional<std::ofstream> spatial_out, profile_out;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir / "diag");
    spatial_out.emplace(open_out(*out_dir / "diag" / "spatial.csv"));
    *spatial_out << "t,rho_std,rho_min,rho_max,rho_mean\n";
    profile_out.emplace(open_out(*out_dir / "diag" / "profiles.csv"));
    *profile_out << "t,i,x,rho,jx,jy\n";
  }
  const double tol = 1e-6 * cfg.time_step();
  auto write_profile = [&](double t, const XProfile& p) {
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      *profile_out << t << ',' << i << ',' << p.x[i] << ',' << p.rho[i] << ',' << p.jx[i] << ','
                   << p.jy[i] << '\n';
    }
  };
  double last_profile_t = -1.0;
  RunOptions options;
  options.out_dir = out_dir;
  options.on_diag = [&](const KineticSolver& solver, const SeriesRow& row) {
    const SpatialStats st = spatial_stats(solver.field(), row.t);
    report.stats.push_back(st);
    if (spatial_out) {
      *spatial_out << st.t << ',' << st.rho_std << ',' << st.rho_min << ',' << st.rho_max << ','
                   << st.rho_mean << '\n';
    }
    // the last diagnostic is always at the final time
    report.final_profile = x_profile(solver.field());
    if (profile_out && on_schedule(row.t, cfg.snapshot_every, tol)) {
      write_profile(row.t, report.final_profile);
      last_profile_t = row.t;
    }
  };

  report.record = run(cfg, options);
  report.max_rho = max_rho_series(report.record);
  if (profile_out && last_profile_t != report.record.final_time) {
    write_profile(report.record.final_time, report.final_profile);
  }
  if (out_dir) {
    auto mr = open_out(*out_dir / "diag" / "max_rho.csv");
    mr << "t,max_rho\n";
    for (std::size_t n = 0; n < report.max_rho.times.size(); ++n) {
      mr << report.max_rho.times[n] << ',' << report.max_rho.max_rho[n] << '\n';
    }
    auto summary = open_out(*out_dir / "diag" / "summary.txt");
    summary << "steps = " << report.record.steps << '\n'
            << "final_time = " << report.record.final_time << '\n'
            << "aborted = " << (report.record.aborted ? "true" : "false") << '\n';
    if (report.record.aborted) summary << "abort_reason = " << report.record.abort_reason << '\n';
    summary << "entropy_floor_hits = " << report.record.entropy_floor_hits << '\n'
            << "max_rho_peaks_final_third = " << report.max_rho.period.peak_times.size() << '\n';
    if (report.max_rho.period.period) {
      summary << "max_rho_period = " << *report.max_rho.period.period << '\n'
              << "max_rho_spacing_variation = " << report.max_rho.period.spacing_variation << '\n';
    }
  }
  return report;
}

std::vector<PhaseScanRow> phase_scan(const PhaseScanConfig& cfg,
                                     const std::function<void(const PhaseScanRow&)>& on_row) {
  if (cfg.steps < 1) throw std::invalid_argument("scan needs at least one step per axis");
  if (!(cfg.rho_min > 0.0) || cfg.rho_max < cfg.rho_min || !(cfg.sigma_min > 0.0) ||
      cfg.sigma_max < cfg.sigma_min) {
    throw std::invalid_argument("scan ranges must be positive and ordered");
  }
  auto level = [&](double lo, double hi, std::size_t a) {
    if (cfg.steps == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(a) / static_cast<double>(cfg.steps - 1);
  };
  std::vector<PhaseScanRow> rows;
  for (std::size_t a = 0; a < cfg.steps; ++a) {
    for (std::size_t b = 0; b < cfg.steps; ++b) {
      SolverConfig run_cfg = cfg.base;
      run_cfg.init.mean_rho = level(cfg.rho_min, cfg.rho_max, a);
      run_cfg.sigma = level(cfg.sigma_min, cfg.sigma_max, b);
      run_cfg.snapshot_every = run_cfg.diag_every = run_cfg.t_end;
      const RunRecord rec = run(run_cfg);
      const SeriesRow& last = rec.series.back();
      PhaseScanRow row;
      row.rho_bar = last.rho_bar;
      row.sigma = run_cfg.sigma;
      row.e_u = last.e_u;
      row.e_vm = last.e_vm;
      row.kappa = solve_kappa(last.rho_bar, run_cfg.mu, run_cfg.sigma).kappa;
      row.aborted = rec.aborted;
      rows.push_back(row);
      if (on_row) on_row(row);
    }
  }
  return rows;
}

void write_phase_scan(const std::filesystem::path& path, const std::vector<PhaseScanRow>& rows) {
  auto out = open_out(path);
  out << kPhaseHeader << '\n';
  for (const auto& r : rows) out << csv_row({r.rho_bar, r.sigma, r.e_u, r.e_vm, r.kappa}) << '\n';
}

MicroParams micro_preset(const std::string& name) {
  MicroParams p;  // defaults are the published parameter table
  if (name == "micro-band") {
    p.n_particles = 10000;
  } else if (name == "micro-band-full") {
    p.n_particles = 30000;
  } else {
    throw UnknownPreset("unknown particle preset '" + name + "'");
  }
  return p;
}

void apply_micro_option(MicroParams& p, const std::string& key, const std::string& value) {
  try {
    if (key == "n_particles") p.n_particles = parse_unsigned(key, value);
    else if (key == "mu") p.mu = parse_double(key, value);
    else if (key == "sigma") p.sigma = parse_double(key, value);
    else if (key == "c") p.c = parse_double(key, value);
    else if (key == "radius" || key == "R") p.radius = parse_double(key, value);
    else if (key == "length" || key == "L") p.length = parse_double(key, value);
    else if (key == "dt") p.dt = parse_double(key, value);
    else if (key == "model") p.model = parse_model(value);
    else if (key == "seed") p.seed = parse_unsigned(key, value);
    else if (key == "include_self") p.include_self = parse_bool(key, value);
    else if (key == "t_end") p.t_end = parse_double(key, value);
    else if (key == "snapshot_every") p.snapshot_every = parse_double(key, value);
    else if (key == "profile_dx") p.profile_dx = parse_double(key, value);
    else throw ConfigError("unknown particle key '" + key + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

MicroParams micro_params_from(const KeyValues& kv, MicroParams base) {
  for (const auto& [k, v] : kv) apply_micro_option(base, k, v);
  return base;
}

std::string format_micro_params(const MicroParams& p) {
  std::ostringstream os;
  os << std::setprecision(17) << "n_particles = " << p.n_particles << '\n'
     << "mu = " << p.mu << '\n'
     << "sigma = " << p.sigma << '\n'
     << "c = " << p.c << '\n'
     << "radius = " << p.radius << '\n'
     << "length = " << p.length << '\n'
     << "dt = " << p.dt << '\n'
     << "model = " << to_string(p.model) << '\n'
     << "seed = " << p.seed << '\n'
     << "include_self = " << (p.include_self ? "true" : "false") << '\n'
     << "t_end = " << p.t_end << '\n'
     << "snapshot_every = " << p.snapshot_every << '\n'
     << "profile_dx = " << p.profile_dx << '\n';
  return os.str();
}

Axis motion_axis(const ParticleState& s) {
  double cx = 0.0, sy = 0.0;
  for (double t : s.theta) {
    cx += std::cos(t);
    sy += std::sin(t);
  }
  return std::abs(cx) >= std::abs(sy) ? Axis::X : Axis::Y;
}

double motion_sign(const ParticleState& s, Axis axis) {
  double sum = 0.0;
  for (double t : s.theta) sum += axis == Axis::X ? std::cos(t) : std::sin(t);
  return sum < 0.0 ? -1.0 : 1.0;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("correlation: size mismatch");
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

MicroReport run_micro(const MicroParams& p, const std::optional<std::filesystem::path>& out_dir) {
  p.validate();
  MicroReport report;
  ParticleState s = random_state(p);
  report.initial_neighbors = avg_neighbors(s, p.radius, p.length);

  std::optional<std::ofstream> series_out;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir / "snapshots");
    std::filesystem::create_directories(*out_dir / "diag");
    std::filesystem::remove(*out_dir / "diag" / "band_profile.csv");
    series_out.emplace(open_out(*out_dir / "diag" / "micro_series.csv"));
    *series_out << "t,polar_order,axis,peak_ratio,rho_flux_correlation\n";
  }
  std::size_t snap = 0;
  auto observe = [&]() {
    MicroSample ms;
    ms.t = s.time;
    ms.polar_order = polar_order(s);
    ms.axis = motion_axis(s);
    const BandProfile prof = band_profile(s, p.profile_dx, p.length, ms.axis);
    const double mean = std::accumulate(prof.rho.begin(), prof.rho.end(), 0.0) /
                        static_cast<double>(prof.rho.size());
    ms.profile_peak_ratio = *std::max_element(prof.rho.begin(), prof.rho.end()) / mean;
    // flux along the direction of travel, so a band moving towards -x counts the same
    std::vector<double> forward = prof.rho_u;
    if (motion_sign(s, ms.axis) < 0.0) {
      for (double& v : forward) v = -v;
    }
    ms.rho_flux_correlation = correlation(prof.rho, forward);
    report.samples.push_back(ms);
    if (out_dir) {
      std::ostringstream name;
      name << "traj_" << std::setw(6) << std::setfill('0') << snap++ << ".csv";
      write_trajectory(*out_dir / "snapshots" / name.str(), s);
      append_band_profile(*out_dir / "diag" / "band_profile.csv", s.time, prof);
      *series_out << ms.t << ',' << ms.polar_order << ',' << (ms.axis == Axis::X ? "x" : "y") << ','
                  << ms.profile_peak_ratio << ',' << ms.rho_flux_correlation << '\n';
    }
    return prof;
  };

  const std::size_t steps = step_count(p.t_end, p.dt);
  observe();
  BandProfile last;
  bool last_current = true;
  for (std::size_t n = 1; n <= steps; ++n) {
    s = step_particles(s, p);
    last_current = false;
    if (on_schedule(s.time, p.snapshot_every, 1e-6 * p.dt)) {
      last = observe();
      last_current = true;
    }
  }
  if (!last_current) last = observe();
  report.axis = report.samples.back().axis;
  report.final_profile = std::move(last);
  report.final_state = std::move(s);
  return report;
}

}  // namespace swarmkin::experiments
