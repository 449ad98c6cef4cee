#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace swarmkin {

/// One row of the diagnostic time series.
struct SeriesRow {
  double t = 0.0;
  double mass = 0.0;
  double rho_bar = 0.0;
  double max_rho = 0.0;
  double e_u = 0.0;
  double e_vm = 0.0;
  double j_global = 0.0;
};

struct RunRecord {
  std::vector<double> times;  // diagnostic times, strictly increasing
  std::vector<SeriesRow> series;
  std::vector<double> snapshot_times;
  std::vector<std::filesystem::path> snapshots;
  std::uint64_t steps = 0;
  double final_time = 0.0;
  bool aborted = false;
  std::string abort_reason;
  std::size_t entropy_floor_hits = 0;
};

}  // namespace swarmkin
