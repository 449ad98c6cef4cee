#include "swarmkin/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swarmkin/experiments.hpp"
#include "swarmkin/io.hpp"

namespace swarmkin::cli {

namespace fs = std::filesystem;
namespace ex = swarmkin::experiments;

namespace {

struct Failure {
  ExitCode code;
  std::string name;
  std::string message;
};

[[noreturn]] void fail(ExitCode code, const std::string& name, const std::string& message) {
  throw Failure{code, name, message};
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

using Setter = std::function<void(const std::string&)>;

/// Applies key = value pairs through a table, rejecting unknown keys.
void apply_table(const KeyValues& kv, const std::map<std::string, Setter>& table,
                 const std::string& what) {
  for (const auto& [k, v] : kv) {
    const auto it = table.find(k);
    if (it == table.end()) throw ConfigError("unknown " + what + " key '" + k + "'");
    try {
      it->second(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("key '" + k + "': " + e.what());
    }
  }
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_unsigned(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
  return out;
}

struct OutputDir {
  fs::path root;

  fs::path diag() const { return root / "diag"; }
};

OutputDir prepare_output(const std::optional<std::string>& out, const std::string& name, bool force) {
  fs::path root;
  if (out) {
    root = *out;
  } else if (const char* env = std::getenv(kOutRootEnv); env != nullptr && *env != '\0') {
    root = fs::path(env) / name;
  } else {
    root = fs::path("swarmkin-runs") / name;
  }
  std::error_code ec;
  if (fs::exists(root, ec)) {
    if (!fs::is_directory(root, ec)) {
      fail(kOutputDir, "output_dir", "'" + root.string() + "' exists and is not a directory");
    }
    if (!fs::is_empty(root, ec)) {
      if (!force) {
        fail(kOutputDir, "output_dir",
             "'" + root.string() + "' already exists; pass --force to replace it");
      }
      fs::remove_all(root, ec);
      if (ec) fail(kOutputDir, "output_dir", "cannot clear '" + root.string() + "': " + ec.message());
    }
  }
  fs::create_directories(root / "snapshots", ec);
  if (!ec) fs::create_directories(root / "diag", ec);
  if (ec) fail(kOutputDir, "output_dir", "cannot create '" + root.string() + "': " + ec.message());
  // write probe: a directory can exist yet refuse files
  const fs::path probe = root / ".write-probe";
  {
    std::ofstream p(probe);
    if (!p) fail(kOutputDir, "output_dir", "'" + root.string() + "' is not writable");
  }
  fs::remove(probe, ec);
  return OutputDir{root};
}

// Only real presets go in the preset key; the body is complete either way.
std::string echo_header(const std::string& label) {
  return ex::is_preset(label) ? "preset = " + label + "\n" : "# from " + label + "\n";
}

void write_echo(const OutputDir& dir, const std::string& header, const std::string& body) {
  std::ofstream out(dir.root / "config.echo");
  if (!out) throw IoError("cannot write config.echo");
  out << header << body;
}

KeyValues gather_overrides(const std::vector<std::string>& overrides) {
  KeyValues kv;
  for (const auto& o : overrides) {
    const auto [k, v] = split_override(o);
    kv[k] = v;
  }
  return kv;
}

// --- homogeneous presets -----------------------------------------------------

void run_accuracy(const KeyValues& kv, const OutputDir& dir, std::ostream& out) {
  ex::AccuracyConfig cfg;
  apply_table(kv,
              {{"model", [&](const std::string& v) { cfg.model = parse_model(v); }},
               {"mu", [&](const std::string& v) { cfg.mu = parse_double("mu", v); }},
               {"sigma", [&](const std::string& v) { cfg.sigma = parse_double("sigma", v); }},
               {"t_end", [&](const std::string& v) { cfg.t_end = parse_double("t_end", v); }},
               {"dt", [&](const std::string& v) { cfg.dt = parse_double("dt", v); }},
               {"n_thetas", [&](const std::string& v) { cfg.n_thetas = parse_size_list("n_thetas", v); }},
               {"n_reference",
                [&](const std::string& v) { cfg.n_reference = parse_unsigned("n_reference", v); }}},
              "accuracy-order");
  std::ostringstream echo;
  echo << std::setprecision(17) << "model = " << to_string(cfg.model) << "\nmu = " << cfg.mu
       << "\nsigma = " << cfg.sigma << "\nt_end = " << cfg.t_end << "\ndt = " << cfg.dt
       << "\nn_reference = " << cfg.n_reference << "\nn_thetas = ";
  for (std::size_t i = 0; i < cfg.n_thetas.size(); ++i) echo << (i ? "," : "") << cfg.n_thetas[i];
  echo << '\n';
  write_echo(dir, "preset = accuracy-order\n", echo.str());

  const ex::AccuracyReport rep = ex::accuracy_order_experiment(cfg);
  std::ofstream table(dir.diag() / "accuracy.csv");
  table << std::setprecision(17) << "n_theta,dtheta,l2_error\n";
  for (std::size_t i = 0; i < rep.n_thetas.size(); ++i) {
    table << rep.n_thetas[i] << ',' << rep.fit.dtheta[i] << ',' << rep.fit.l2_error[i] << '\n';
  }
  std::ofstream ref(dir.diag() / "reference.csv");
  ref << std::setprecision(17) << "theta,f0,f_ref\n";
  const AngularGrid grid(cfg.n_reference);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ref << grid.theta(k) << ',' << rep.initial_reference[k] << ',' << rep.final_reference[k] << '\n';
  }
  if (!table || !ref) throw IoError("failed writing accuracy tables");
  out << "n_theta,dtheta,l2_error\n";
  for (std::size_t i = 0; i < rep.n_thetas.size(); ++i) {
    out << rep.n_thetas[i] << ',' << num(rep.fit.dtheta[i]) << ',' << num(rep.fit.l2_error[i]) << '\n';
  }
  out << "slope=" << num(rep.fit.slope) << '\n';
}

void run_relaxation(const KeyValues& kv, const OutputDir& dir, std::ostream& out) {
  ex::RelaxationConfig cfg;
  apply_table(kv,
              {{"model", [&](const std::string& v) { cfg.model = parse_model(v); }},
               {"mu", [&](const std::string& v) { cfg.mu = parse_double("mu", v); }},
               {"sigma", [&](const std::string& v) { cfg.sigma = parse_double("sigma", v); }},
               {"n_theta", [&](const std::string& v) { cfg.n_theta = parse_unsigned("n_theta", v); }},
               {"t_end", [&](const std::string& v) { cfg.t_end = parse_double("t_end", v); }},
               {"dt", [&](const std::string& v) { cfg.dt = parse_double("dt", v); }},
               {"sample_every",
                [&](const std::string& v) { cfg.sample_every = parse_double("sample_every", v); }}},
              "homogeneous-relaxation");
  std::ostringstream echo;
  echo << std::setprecision(17) << "model = " << to_string(cfg.model) << "\nmu = " << cfg.mu
       << "\nsigma = " << cfg.sigma << "\nn_theta = " << cfg.n_theta << "\nt_end = " << cfg.t_end
       << "\ndt = " << cfg.dt << "\nsample_every = " << cfg.sample_every << '\n';
  write_echo(dir, "preset = homogeneous-relaxation\n", echo.str());

  const ex::RelaxationReport rep = ex::relaxation_experiment(cfg);
  std::ofstream table(dir.diag() / "relaxation.csv");
  table << std::setprecision(17) << "t,free_energy,entropy_part,interaction_part,gap\n";
  for (std::size_t n = 0; n < rep.times.size(); ++n) {
    const auto& fe = rep.free_energy[n];
    table << rep.times[n] << ',' << fe.total << ',' << fe.entropy_part << ',' << fe.interaction_part
          << ',' << rep.gap[n] << '\n';
  }
  if (!table) throw IoError("failed writing relaxation table");
  out << "samples=" << rep.times.size() << '\n'
      << "free_energy_monotone=" << (rep.first_increase == 0 ? "true" : "false") << '\n'
      << "worst_relative_rise=" << num(rep.worst_relative_rise) << '\n'
      << "log_gap_slope=" << num(rep.log_gap_slope) << '\n'
      << "log_gap_r2=" << num(rep.log_gap_r2) << '\n';
}

void run_adaptive(const KeyValues& kv, const OutputDir& dir, std::ostream& out) {
  ex::AdaptiveConfig cfg;
  apply_table(kv,
              {{"mu", [&](const std::string& v) { cfg.mu = parse_double("mu", v); }},
               {"sigma", [&](const std::string& v) { cfg.sigma = parse_double("sigma", v); }},
               {"rho", [&](const std::string& v) { cfg.rho = parse_double("rho", v); }},
               {"t_end", [&](const std::string& v) { cfg.t_end = parse_double("t_end", v); }},
               {"window", [&](const std::string& v) { cfg.window = parse_double("window", v); }},
               {"n_thetas", [&](const std::string& v) { cfg.n_thetas = parse_size_list("n_thetas", v); }},
               {"n_reference",
                [&](const std::string& v) { cfg.n_reference = parse_unsigned("n_reference", v); }},
               {"standard_dt",
                [&](const std::string& v) { cfg.standard_dt = parse_double("standard_dt", v); }},
               {"timing_repeats",
                [&](const std::string& v) { cfg.timing_repeats = parse_unsigned("timing_repeats", v); }}},
              "adaptive-vs-standard");
  std::ostringstream echo;
  echo << std::setprecision(17) << "mu = " << cfg.mu << "\nsigma = " << cfg.sigma
       << "\nrho = " << cfg.rho << "\nt_end = " << cfg.t_end << "\nwindow = " << cfg.window
       << "\nn_reference = " << cfg.n_reference << "\nstandard_dt = " << cfg.standard_dt
       << "\ntiming_repeats = " << cfg.timing_repeats << "\nn_thetas = ";
  for (std::size_t i = 0; i < cfg.n_thetas.size(); ++i) echo << (i ? "," : "") << cfg.n_thetas[i];
  echo << '\n';
  write_echo(dir, "preset = adaptive-vs-standard\n", echo.str());

  const ex::AdaptiveReport rep = ex::adaptive_vs_standard(cfg);
  const std::string header =
      "n_theta,standard_error,adaptive_error,difference,standard_seconds,adaptive_seconds,"
      "standard_steps,adaptive_substeps";
  std::ofstream table(dir.diag() / "adaptive.csv");
  table << std::setprecision(17) << header << '\n';
  out << "standard_dt=" << num(rep.standard_dt) << '\n' << header << '\n';
  for (const auto& r : rep.rows) {
    std::ostringstream line;
    line << std::setprecision(17) << r.n_theta << ',' << r.standard_error << ',' << r.adaptive_error
         << ',' << r.difference << ',' << r.standard_seconds << ',' << r.adaptive_seconds << ','
         << r.standard_steps << ',' << r.adaptive_substeps;
    table << line.str() << '\n';
    out << line.str() << '\n';
  }
  if (!table) throw IoError("failed writing adaptive table");
}

// --- kinetic presets ---------------------------------------------------------

int run_kinetic_config(const SolverConfig& cfg, const std::string& label, const OutputDir& dir,
                       std::ostream& out) {
  write_echo(dir, echo_header(label), format_solver_config(cfg));
  const ex::KineticReport rep = ex::run_kinetic(cfg, dir.root);
  const SeriesRow& first = rep.record.series.front();
  const SeriesRow& last = rep.record.series.back();
  out << "steps=" << rep.record.steps << '\n'
      << "final_time=" << num(rep.record.final_time) << '\n'
      << "mass_initial=" << num(first.mass) << '\n'
      << "mass_final=" << num(last.mass) << '\n'
      << "rho_bar=" << num(last.rho_bar) << '\n'
      << "max_rho_final=" << num(last.max_rho) << '\n'
      << "E_u_final=" << num(last.e_u) << '\n'
      << "E_VM_final=" << num(last.e_vm) << '\n'
      << "snapshots=" << rep.record.snapshots.size() << '\n';
  if (rep.max_rho.period.period) out << "max_rho_period=" << num(*rep.max_rho.period.period) << '\n';
  if (rep.record.aborted) {
    fail(kAborted, "run_aborted",
         "run stopped at t=" + num(rep.record.final_time) + ": " + rep.record.abort_reason);
  }
  return kOk;
}

// --- phase diagram -----------------------------------------------------------

struct ScanArgs {
  double rho_min = 0.02, rho_max = 0.12, sigma_min = 0.1, sigma_max = 0.4;
  std::size_t steps = 6;
};

void run_phase(ScanArgs args, const KeyValues& kv, const OutputDir& dir, std::ostream& out) {
  ex::PhaseScanConfig cfg;
  KeyValues solver_keys;
  for (const auto& [k, v] : kv) {
    if (k == "rho_min") args.rho_min = parse_double(k, v);
    else if (k == "rho_max") args.rho_max = parse_double(k, v);
    else if (k == "sigma_min") args.sigma_min = parse_double(k, v);
    else if (k == "sigma_max") args.sigma_max = parse_double(k, v);
    else if (k == "steps") args.steps = parse_unsigned(k, v);
    else solver_keys[k] = v;
  }
  cfg.base = solver_config_from(solver_keys, cfg.base);
  cfg.rho_min = args.rho_min;
  cfg.rho_max = args.rho_max;
  cfg.sigma_min = args.sigma_min;
  cfg.sigma_max = args.sigma_max;
  cfg.steps = args.steps;
  try {
    cfg.base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::ostringstream echo;
  echo << std::setprecision(17) << "rho_min = " << cfg.rho_min << "\nrho_max = " << cfg.rho_max
       << "\nsigma_min = " << cfg.sigma_min << "\nsigma_max = " << cfg.sigma_max
       << "\nsteps = " << cfg.steps << '\n'
       << format_solver_config(cfg.base);
  write_echo(dir, "preset = phase-diagram\n", echo.str());
  out << ex::kPhaseHeader << '\n';
  std::vector<ex::PhaseScanRow> rows;
  try {
    rows = ex::phase_scan(cfg, [&](const ex::PhaseScanRow& r) {
      out << csv_row({r.rho_bar, r.sigma, r.e_u, r.e_vm, r.kappa}) << (r.aborted ? " # aborted" : "")
          << '\n';
    });
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  ex::write_phase_scan(dir.diag() / "phase.csv", rows);
}

// --- micro ---------------------------------------------------------------------

void run_micro_params(const MicroParams& p, const std::string& label, const OutputDir& dir,
                      std::ostream& out) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  write_echo(dir, echo_header(label), ex::format_micro_params(p));
  const ex::MicroReport rep = ex::run_micro(p, dir.root);
  const auto& last = rep.samples.back();
  out << "final_time=" << num(rep.final_state.time) << '\n'
      << "neighbors_empirical_initial=" << num(rep.initial_neighbors.empirical) << '\n'
      << "neighbors_estimate=" << num(rep.initial_neighbors.homogeneous_estimate) << '\n'
      << "polar_order=" << num(last.polar_order) << '\n'
      << "band_axis=" << (rep.axis == Axis::X ? "x" : "y") << '\n'
      << "profile_peak_ratio=" << num(last.profile_peak_ratio) << '\n'
      << "rho_flux_correlation=" << num(last.rho_flux_correlation) << '\n';
}

/// Splits a config file into its optional `preset` key and the rest.
std::pair<std::optional<std::string>, KeyValues> load_config_file(const std::string& path) {
  KeyValues kv = read_key_values(path);
  std::optional<std::string> preset;
  if (const auto it = kv.find("preset"); it != kv.end()) {
    preset = it->second;
    kv.erase(it);
  }
  return {preset, kv};
}

bool is_micro(const std::string& preset) {
  return preset == "micro-band" || preset == "micro-band-full";
}

int dispatch_run(const std::string& target, const std::vector<std::string>& overrides,
                 const std::optional<std::string>& out_arg, bool force, std::ostream& out) {
  std::string preset;
  KeyValues kv;
  std::string label;
  if (ex::is_preset(target)) {
    preset = label = target;
  } else if (fs::is_regular_file(target)) {
    auto [p, file_kv] = load_config_file(target);
    kv = std::move(file_kv);
    label = fs::path(target).stem().string();
    if (p) {
      if (!ex::is_preset(*p)) fail(kUnknownPreset, "unknown_preset", "unknown preset '" + *p + "'");
      preset = *p;
    }
  } else {
    std::string list;
    for (const auto& n : ex::preset_names()) list += (list.empty() ? "" : ",") + n;
    fail(kUnknownPreset, "unknown_preset",
         "'" + target + "' is neither a preset nor a readable config file; presets: " + list);
  }
  for (const auto& [k, v] : gather_overrides(overrides)) kv[k] = v;

  // Parse everything before touching the output directory.
  if (preset == "accuracy-order" || preset == "homogeneous-relaxation" ||
      preset == "adaptive-vs-standard") {
    const OutputDir dir = prepare_output(out_arg, label, force);
    if (preset == "accuracy-order") run_accuracy(kv, dir, out);
    else if (preset == "homogeneous-relaxation") run_relaxation(kv, dir, out);
    else run_adaptive(kv, dir, out);
    return kOk;
  }
  if (preset == "phase-diagram") {
    const OutputDir dir = prepare_output(out_arg, label, force);
    run_phase(ScanArgs{}, kv, dir, out);
    return kOk;
  }
  if (is_micro(preset)) {
    const MicroParams p = ex::micro_params_from(kv, ex::micro_preset(preset));
    const OutputDir dir = prepare_output(out_arg, label, force);
    run_micro_params(p, label, dir, out);
    return kOk;
  }
  SolverConfig cfg = preset.empty() ? SolverConfig{} : ex::solver_preset(preset);
  cfg = solver_config_from(kv, cfg);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const OutputDir dir = prepare_output(out_arg, label, force);
  return run_kinetic_config(cfg, label, dir, out);
}

int run_diag(const std::string& snapshot, bool want_eu, bool want_evm, bool want_kappa,
             std::ostream& out) {
  const Snapshot snap = read_snapshot(snapshot);
  if (!want_eu && !want_evm && !want_kappa) want_eu = want_evm = want_kappa = true;
  const DensityFlux df = density_and_flux(snap.field);
  const KappaSolution ks = solve_kappa(df.rho_bar, snap.meta.mu, snap.meta.sigma);
  out << "t=" << num(snap.t) << '\n'
      << "model=" << to_string(snap.meta.model) << '\n'
      << "mass=" << num(df.mass) << '\n'
      << "rho_bar=" << num(df.rho_bar) << '\n';
  if (want_eu) out << "E_u=" << num(entropy_uniform(snap.field)) << '\n';
  if (want_evm) {
    out << "E_VM=" << num(entropy_vonmises(snap.field, snap.meta.mu, snap.meta.sigma, ks.kappa)) << '\n';
  }
  if (want_kappa) {
    out << "kappa=" << num(ks.kappa) << '\n'
        << "kappa_branch=" << (ks.branch == KappaBranch::Zero ? "zero" : "positive") << '\n'
        << "threshold_sigma=" << num(ks.threshold_sigma) << '\n';
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, char** argv) { return run_cli(argc, argv, std::cout, std::cerr); }

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"swarmkin: kinetic Vicsek / DFL solver and particle simulator"};
  app.require_subcommand(1);

  std::string run_target;
  std::vector<std::string> overrides;
  std::optional<std::string> out_dir;
  bool force = false;
  auto* run_cmd = app.add_subcommand("run", "run a preset or a key = value config file");
  run_cmd->add_option("target", run_target, "preset name or config file")->required();
  run_cmd->add_option("--override,-O", overrides, "key=value, repeatable");
  run_cmd->add_option("--out,-o", out_dir, "output directory");
  run_cmd->add_flag("--force", force, "replace an existing output directory");

  std::string snap_path;
  bool e_u = false, e_vm = false, kappa = false;
  auto* diag_cmd = app.add_subcommand("diag", "diagnostics of one snapshot file");
  diag_cmd->add_option("snapshot", snap_path, "snapshot file")->required();
  diag_cmd->add_flag("--e-u", e_u, "entropy against the uniform state");
  diag_cmd->add_flag("--e-vm", e_vm, "entropy against the von Mises state");
  diag_cmd->add_flag("--kappa", kappa, "compatibility-condition concentration");

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan-phase", "entropy scan over (rho_bar, sigma)");
  scan_cmd->add_option("--rho-min", scan.rho_min);
  scan_cmd->add_option("--rho-max", scan.rho_max);
  scan_cmd->add_option("--sigma-min", scan.sigma_min);
  scan_cmd->add_option("--sigma-max", scan.sigma_max);
  scan_cmd->add_option("--steps", scan.steps, "points per axis");
  scan_cmd->add_option("--override,-O", overrides, "solver key=value, repeatable");
  scan_cmd->add_option("--out,-o", out_dir, "output directory");
  scan_cmd->add_flag("--force", force, "replace an existing output directory");

  std::string micro_target;
  auto* micro_cmd = app.add_subcommand("micro", "particle simulation from a config file or preset");
  micro_cmd->add_option("config", micro_target, "config file or micro preset")->required();
  micro_cmd->add_option("--override,-O", overrides, "key=value, repeatable");
  micro_cmd->add_option("--out,-o", out_dir, "output directory");
  micro_cmd->add_flag("--force", force, "replace an existing output directory");

  app.add_subcommand("presets", "list preset names");

  auto report = [&](ExitCode code, const std::string& name, const std::string& message) {
    err << "error: code=" << name << " exit=" << static_cast<int>(code)
        << " message=" << one_line(message) << std::endl;
    return static_cast<int>(code);
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(kUsage, "usage", e.what());
  }

  try {
    if (*run_cmd) return dispatch_run(run_target, overrides, out_dir, force, out);
    if (*diag_cmd) return run_diag(snap_path, e_u, e_vm, kappa, out);
    if (*scan_cmd) {
      const KeyValues kv = gather_overrides(overrides);
      const OutputDir dir = prepare_output(out_dir, "phase-diagram", force);
      run_phase(scan, kv, dir, out);
      return kOk;
    }
    if (*micro_cmd) {
      MicroParams p;
      std::string label;
      if (is_micro(micro_target)) {
        p = ex::micro_preset(micro_target);
        label = micro_target;
      } else if (fs::is_regular_file(micro_target)) {
        auto [preset, kv] = load_config_file(micro_target);
        if (preset && !is_micro(*preset)) {
          fail(kUnknownPreset, "unknown_preset", "unknown particle preset '" + *preset + "'");
        }
        p = ex::micro_params_from(kv, ex::micro_preset(preset.value_or("micro-band")));
        label = fs::path(micro_target).stem().string();
      } else {
        fail(kUnknownPreset, "unknown_preset",
             "'" + micro_target + "' is neither a particle preset nor a readable config file");
      }
      p = ex::micro_params_from(gather_overrides(overrides), p);
      const OutputDir dir = prepare_output(out_dir, label, force);
      run_micro_params(p, label, dir, out);
      return kOk;
    }
    for (const auto& n : ex::preset_names()) out << n << '\n';
    return kOk;
  } catch (const Failure& f) {
    return report(f.code, f.name, f.message);
  } catch (const ex::UnknownPreset& e) {
    return report(kUnknownPreset, "unknown_preset", e.what());
  } catch (const ConfigError& e) {
    return report(kMalformedConfig, "malformed_config", e.what());
  } catch (const IoError& e) {
    return report(kIo, "io", e.what());
  } catch (const fs::filesystem_error& e) {
    return report(kIo, "io", e.what());
  } catch (const std::exception& e) {
    return report(kInternal, "internal", e.what());
  }
}

}  // namespace swarmkin::cli
