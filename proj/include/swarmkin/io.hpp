#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmkin/collision.hpp"
#include "swarmkin/kinetic_solver.hpp"
#include "swarmkin/run_record.hpp"
#include "swarmkin/transport.hpp"

namespace swarmkin {

/// Malformed configuration text or an unknown/invalid key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, unwritable or corrupt files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Snapshot files.
//
// Line 1 (ASCII, '\n'-terminated):
//   swarmkin-snapshot v1 t=<t> L=<L> m_x=<m_x> m_y=<m_y> n_theta=<n> model=<vicsek|dfl>
//   mu=<mu> sigma=<sigma> c=<c> pseudo_1d=<0|1> format=<text|f64le>
// (a single line; wrapped here). Then m_x·m_y·n_theta values of f in
// row-major (i, j, k) order: for `text` one value per line printed with 17
// significant digits, for `f64le` raw IEEE-754 binary64 little-endian bytes
// immediately after the header newline, nothing after them.

struct SnapshotMeta {
  ModelKind model = ModelKind::DFL;
  double mu = 1.0;
  double sigma = 0.2;
  double c = 1.0;
};

struct Snapshot {
  double t = 0.0;
  SnapshotMeta meta;
  DistributionField field;
};

std::string snapshot_file_name(std::size_t index);
void write_snapshot(const std::filesystem::path& path, const DistributionField& field, double t,
                    const SnapshotMeta& meta, SnapshotFormat format);
Snapshot read_snapshot(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Series file: CSV with header t,mass,rho_bar,max_rho,E_u,E_VM,j_global.

inline constexpr const char* kSeriesHeader = "t,mass,rho_bar,max_rho,E_u,E_VM,j_global";

class SeriesWriter {
 public:
  explicit SeriesWriter(const std::filesystem::path& path);
  void write(const SeriesRow& row);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

std::vector<SeriesRow> read_series(const std::filesystem::path& path);

/// Formats a row of doubles with 17 significant digits, comma-separated.
std::string csv_row(std::initializer_list<double> values);

// ---------------------------------------------------------------------------
// Flat key = value configuration. '#' starts a comment; blank lines ignored.

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>");
KeyValues read_key_values(const std::filesystem::path& path);
/// Splits "key=value"; throws ConfigError if there is no '='.
std::pair<std::string, std::string> split_override(const std::string& text);

void apply_solver_option(SolverConfig& cfg, const std::string& key, const std::string& value);
SolverConfig solver_config_from(const KeyValues& kv, SolverConfig base = {});
/// Echo in the same key = value format, readable by solver_config_from.
std::string format_solver_config(const SolverConfig& cfg);

double parse_double(const std::string& key, const std::string& value);
std::uint64_t parse_unsigned(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

}  // namespace swarmkin
