#include "swarmkin/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace swarmkin {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xFFu) << (8 * (7 - b));
    return r;
  }
}

}  // namespace

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("key '" + key + "': '" + value + "' is not a non-negative integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': '" + value + "' is not a boolean");
}

std::string csv_row(std::initializer_list<double> values) {
  std::string out;
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  return out;
}

std::string snapshot_file_name(std::size_t index) {
  std::ostringstream os;
  os << "snap_" << std::setw(6) << std::setfill('0') << index << ".dat";
  return os.str();
}

void write_snapshot(const std::filesystem::path& path, const DistributionField& field, double t,
                    const SnapshotMeta& meta, SnapshotFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open snapshot '" + path.string() + "' for writing");
  const SpatialGrid& g = field.grid();
  out << "swarmkin-snapshot v1 t=" << format_double(t) << " L=" << format_double(g.length)
      << " m_x=" << g.m_x << " m_y=" << g.m_y << " n_theta=" << field.agrid().size()
      << " model=" << to_string(meta.model) << " mu=" << format_double(meta.mu)
      << " sigma=" << format_double(meta.sigma) << " c=" << format_double(meta.c)
      << " pseudo_1d=" << (g.pseudo_1d ? 1 : 0)
      << " format=" << (format == SnapshotFormat::Text ? "text" : "f64le") << '\n';
  if (format == SnapshotFormat::Text) {
    out << std::setprecision(17);
    for (double v : field.values()) out << v << '\n';
  } else {
    for (double v : field.values()) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
  }
  if (!out) throw IoError("failed writing snapshot '" + path.string() + "'");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot '" + path.string() + "'");
  std::string header;
  if (!std::getline(in, header)) throw IoError("snapshot '" + path.string() + "' is empty");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "swarmkin-snapshot" || version != "v1") {
    throw IoError("snapshot '" + path.string() + "' has an unrecognised header");
  }
  std::map<std::string, std::string> fields;
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw IoError("bad header token '" + token + "'");
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto get = [&](const std::string& k) -> const std::string& {
    const auto it = fields.find(k);
    if (it == fields.end()) throw IoError("snapshot header lacks '" + k + "'");
    return it->second;
  };
  try {
    const double t = parse_double("t", get("t"));
    const double length = parse_double("L", get("L"));
    const auto m_x = static_cast<std::size_t>(parse_unsigned("m_x", get("m_x")));
    const auto m_y = static_cast<std::size_t>(parse_unsigned("m_y", get("m_y")));
    const auto n_theta = static_cast<std::size_t>(parse_unsigned("n_theta", get("n_theta")));
    const bool pseudo = parse_bool("pseudo_1d", get("pseudo_1d"));
    SnapshotMeta meta{parse_model(get("model")), parse_double("mu", get("mu")),
                      parse_double("sigma", get("sigma")), parse_double("c", get("c"))};
    const std::string fmt = get("format");
    Snapshot snap{t, meta,
                  DistributionField(make_spatial_grid(length, m_x, m_y, pseudo), AngularGrid(n_theta))};
    auto values = snap.field.values();
    if (fmt == "text") {
      for (double& v : values) {
        std::string line;
        if (!std::getline(in, line)) throw IoError("snapshot '" + path.string() + "' is truncated");
        v = parse_double("value", line);
      }
    } else if (fmt == "f64le") {
      for (double& v : values) {
        char bytes[8];
        if (!in.read(bytes, 8)) throw IoError("snapshot '" + path.string() + "' is truncated");
        std::uint64_t bits = 0;
        std::memcpy(&bits, bytes, 8);
        v = std::bit_cast<double>(to_little_endian(bits));
      }
      if (in.peek() != std::char_traits<char>::eof()) {
        throw IoError("snapshot '" + path.string() + "' has trailing bytes");
      }
    } else {
      throw IoError("snapshot format '" + fmt + "' is unknown");
    }
    return snap;
  } catch (const ConfigError& e) {
    throw IoError("snapshot '" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("snapshot '" + path.string() + "': " + e.what());
  }
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path) : out_(path), path_(path) {
  if (!out_) throw IoError("cannot open series file '" + path.string() + "' for writing");
  out_ << kSeriesHeader << '\n';
}

void SeriesWriter::write(const SeriesRow& row) {
  out_ << csv_row({row.t, row.mass, row.rho_bar, row.max_rho, row.e_u, row.e_vm, row.j_global})
       << '\n';
  out_.flush();
  if (!out_) throw IoError("failed writing series file '" + path_.string() + "'");
}

std::vector<SeriesRow> read_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSeriesHeader) {
    throw IoError("series file '" + path.string() + "' has an unexpected header");
  }
  std::vector<SeriesRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        cols.push_back(parse_double("column", cell));
      } catch (const ConfigError&) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
    }
    if (cols.size() != 7) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 7 columns");
    }
    rows.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6]});
  }
  return rows;
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse_key_values(in, path.string());
}

std::pair<std::string, std::string> split_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + text + "' is not of the form key=value");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

void apply_solver_option(SolverConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "model") cfg.model = parse_model(value);
    else if (key == "mu") cfg.mu = parse_double(key, value);
    else if (key == "sigma") cfg.sigma = parse_double(key, value);
    else if (key == "c") cfg.c = parse_double(key, value);
    else if (key == "length" || key == "L") cfg.length = parse_double(key, value);
    else if (key == "m_x") cfg.m_x = parse_unsigned(key, value);
    else if (key == "m_y") cfg.m_y = parse_unsigned(key, value);
    else if (key == "n_theta") cfg.n_theta = parse_unsigned(key, value);
    else if (key == "pseudo_1d") cfg.pseudo_1d = parse_bool(key, value);
    else if (key == "t_end") cfg.t_end = parse_double(key, value);
    else if (key == "transport_cfl_factor") cfg.transport_cfl_factor = parse_double(key, value);
    else if (key == "seed") cfg.seed = parse_unsigned(key, value);
    else if (key == "init") cfg.init.kind = parse_init_kind(value);
    else if (key == "init_amplitude") cfg.init.amplitude = parse_double(key, value);
    else if (key == "init_mean_rho") cfg.init.mean_rho = parse_double(key, value);
    else if (key == "init_kappa") cfg.init.kappa = parse_double(key, value);
    else if (key == "init_angle") cfg.init.angle = parse_double(key, value);
    else if (key == "snapshot_every") cfg.snapshot_every = parse_double(key, value);
    else if (key == "diag_every") cfg.diag_every = parse_double(key, value);
    else if (key == "snapshot_format") {
      if (value == "text") cfg.snapshot_format = SnapshotFormat::Text;
      else if (value == "f64le" || value == "binary") cfg.snapshot_format = SnapshotFormat::Binary;
      else throw ConfigError("key 'snapshot_format': expected text or f64le, got '" + value + "'");
    } else if (key == "substep_cap") cfg.substep_cap = parse_unsigned(key, value);
    else if (key == "j_epsilon") cfg.j_epsilon = parse_double(key, value);
    else throw ConfigError("unknown solver key '" + key + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

SolverConfig solver_config_from(const KeyValues& kv, SolverConfig base) {
  for (const auto& [k, v] : kv) apply_solver_option(base, k, v);
  return base;
}

std::string format_solver_config(const SolverConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "model = " << to_string(cfg.model) << '\n'
     << "mu = " << cfg.mu << '\n'
     << "sigma = " << cfg.sigma << '\n'
     << "c = " << cfg.c << '\n'
     << "length = " << cfg.length << '\n'
     << "m_x = " << cfg.m_x << '\n'
     << "m_y = " << cfg.m_y << '\n'
     << "n_theta = " << cfg.n_theta << '\n'
     << "pseudo_1d = " << (cfg.pseudo_1d ? "true" : "false") << '\n'
     << "t_end = " << cfg.t_end << '\n'
     << "transport_cfl_factor = " << cfg.transport_cfl_factor << '\n'
     << "seed = " << cfg.seed << '\n'
     << "init = " << to_string(cfg.init.kind) << '\n'
     << "init_amplitude = " << cfg.init.amplitude << '\n'
     << "init_mean_rho = " << cfg.init.mean_rho << '\n'
     << "init_kappa = " << cfg.init.kappa << '\n'
     << "init_angle = " << cfg.init.angle << '\n'
     << "snapshot_every = " << cfg.snapshot_every << '\n'
     << "diag_every = " << cfg.diag_every << '\n'
     << "snapshot_format = " << (cfg.snapshot_format == SnapshotFormat::Text ? "text" : "f64le") << '\n'
     << "substep_cap = " << cfg.substep_cap << '\n'
     << "j_epsilon = " << cfg.j_epsilon << '\n';
  return os.str();
}

}  // namespace swarmkin
