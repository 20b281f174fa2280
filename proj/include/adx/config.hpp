// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adx/channel.hpp"
#include "adx/engine.hpp"
#include "adx/errors.hpp"
#include "adx/geometry.hpp"
#include "adx/pulse.hpp"
#include "adx/util.hpp"

namespace adx {

enum class Command { ei, rates, backcompat, heatmap };

inline std::string command_label(Command c) {
  switch (c) {
    case Command::ei:
      return "ei";
    case Command::rates:
      return "rates";
    case Command::backcompat:
      return "backcompat";
    case Command::heatmap:
      return "heatmap";
  }
  return "rates";
}

inline Command parse_command(std::string_view text) {
  const std::string t = to_lower(trim(text));
  if (t == "ei") return Command::ei;
  if (t == "rates") return Command::rates;
  if (t == "backcompat") return Command::backcompat;
  if (t == "heatmap") return Command::heatmap;
  throw ConfigError("command: unknown value '" + std::string(text) + "'");
}

struct TopologySpec {
  enum class Kind { file, ppp };
  Kind kind = Kind::ppp;
  std::string path;
  double density_per_m2 = 3e-5;
};

// Fully resolved run description. Every field has a default, so an empty
// config file is a valid run.
struct RunConfig {
  Command command = Command::rates;
  TopologySpec topology;
  double area_m = 1000.0;
  DropSpec drop_mode;
  TagPolicy tag_policy = TagPolicy::centroid;
  std::vector<double> alpha_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9, 1.0};
  int trials = 20000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  double fc_ghz = 2.0;
  double p_d_w = 5.0;
  double rho_dbm = -70.0;
  double p_u_max_dbm = 23.0;
  std::optional<double> beta_dbm;                  // absent = no residual loop
  std::optional<double> noise_psd_dbm_hz = -174.0; // absent = noise off
  double noise_figure_db = 9.0;
  FadingKind fading = FadingKind::rayleigh;

  std::string pulse_ul = "rect";
  std::string pulse_dl = "rect";
  double ei_tolerance = 1e-6;
  double b_hz = 1e6;

  std::vector<double> beta_list_dbm = {-40.0, -10.0};  // backcompat fd-ue grid

  double resolution_m = 10.0;
  int ul_redraws = 100;
  bool pgm = false;
  bool raster_fading = false;

  // CLI-only, never echoed: worker count must not affect any output byte.
  int workers = 0;
};

namespace detail {

inline double require_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  if (!parse_double(value, v))
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return v;
}

inline long long require_int(const std::string& key, const std::string& value) {
  long long v = 0;
  if (!parse_int(value, v))
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

inline bool require_switch(const std::string& key, const std::string& value) {
  const std::string t = to_lower(trim(value));
  if (t == "on" || t == "true" || t == "1") return true;
  if (t == "off" || t == "false" || t == "0") return false;
  throw ConfigError(key + ": expected on|off, got '" + value + "'");
}

// Accepts "a,b,c" or "start:step:stop".
inline std::vector<double> parse_grid(const std::string& key,
                                      const std::string& value) {
  std::vector<double> grid;
  const std::string t = trim(value);
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3)
      throw ConfigError(key + ": expected start:step:stop, got '" + value + "'");
    const double start = require_double(key, parts[0]);
    const double step = require_double(key, parts[1]);
    const double stop = require_double(key, parts[2]);
    if (!(step > 0.0) || stop < start)
      throw ConfigError(key + ": bad range '" + value + "'");
    const int n = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
    for (int i = 0; i < n; ++i)
      grid.push_back(n > 1 ? start + (stop - start) * i / (n - 1) : start);
    return grid;
  }
  for (const std::string& item : split(t, ','))
    grid.push_back(require_double(key, item));
  return grid;
}

inline std::string grid_to_string(const std::vector<double>& grid) {
  std::vector<std::string> parts;
  parts.reserve(grid.size());
  for (double v : grid) parts.push_back(format_double(v));
  return join(parts, ",");
}

}  // namespace detail

// Applies one key=value pair. Unknown keys are rejected.
inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  const std::string v = trim(value);
  if (key == "command") {
    cfg.command = parse_command(v);
  } else if (key == "topology") {
    const std::string t = to_lower(v);
    if (t.rfind("file:", 0) == 0) {
      cfg.topology.kind = TopologySpec::Kind::file;
      cfg.topology.path = trim(v.substr(5));
      if (cfg.topology.path.empty())
        throw ConfigError("topology: empty file path");
    } else if (t.rfind("ppp:", 0) == 0) {
      cfg.topology.kind = TopologySpec::Kind::ppp;
      cfg.topology.density_per_m2 = detail::require_double(key, v.substr(4));
      if (!(cfg.topology.density_per_m2 > 0.0))
        throw ConfigError("topology: ppp density must be positive");
    } else {
      throw ConfigError("topology: expected file:<path> or ppp:<density>");
    }
  } else if (key == "area_m") {
    cfg.area_m = detail::require_double(key, v);
    if (!(cfg.area_m > 0.0)) throw ConfigError("area_m: must be positive");
  } else if (key == "drop_mode") {
    const std::string t = to_lower(v);
    if (t == "per-cell-uniform") {
      cfg.drop_mode = DropSpec{DropSpec::Mode::per_cell_uniform, 0.0};
    } else if (t.rfind("ppp:", 0) == 0) {
      cfg.drop_mode.mode = DropSpec::Mode::ppp;
      cfg.drop_mode.density_per_m2 = detail::require_double(key, v.substr(4));
      if (!(cfg.drop_mode.density_per_m2 > 0.0))
        throw ConfigError("drop_mode: ppp density must be positive");
    } else {
      throw ConfigError("drop_mode: expected per-cell-uniform or ppp:<density>");
    }
  } else if (key == "tag_policy") {
    const std::string t = to_lower(v);
    if (t == "centroid")
      cfg.tag_policy = TagPolicy::centroid;
    else if (t == "all-cells")
      cfg.tag_policy = TagPolicy::all_cells;
    else
      throw ConfigError("tag_policy: expected centroid or all-cells");
  } else if (key == "alpha_grid") {
    cfg.alpha_grid = detail::parse_grid(key, v);
  } else if (key == "trials") {
    const long long t = detail::require_int(key, v);
    if (t < 1) throw ConfigError("trials: must be at least 1");
    cfg.trials = static_cast<int>(t);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(detail::require_int(key, v));
  } else if (key == "output_dir") {
    if (v.empty()) throw ConfigError("output_dir: must not be empty");
    cfg.output_dir = v;
  } else if (key == "fc_ghz") {
    cfg.fc_ghz = detail::require_double(key, v);
    if (!(cfg.fc_ghz > 0.0)) throw ConfigError("fc_ghz: must be positive");
  } else if (key == "p_d_w") {
    cfg.p_d_w = detail::require_double(key, v);
    if (!(cfg.p_d_w > 0.0)) throw ConfigError("p_d_w: must be positive");
  } else if (key == "rho_dbm") {
    cfg.rho_dbm = detail::require_double(key, v);
  } else if (key == "p_u_max_dbm") {
    cfg.p_u_max_dbm = detail::require_double(key, v);
  } else if (key == "beta_dbm") {
    if (to_lower(v) == "off")
      cfg.beta_dbm.reset();
    else
      cfg.beta_dbm = detail::require_double(key, v);
  } else if (key == "noise_psd_dbm_hz") {
    if (to_lower(v) == "off")
      cfg.noise_psd_dbm_hz.reset();
    else
      cfg.noise_psd_dbm_hz = detail::require_double(key, v);
  } else if (key == "noise_figure_db") {
    cfg.noise_figure_db = detail::require_double(key, v);
  } else if (key == "fading") {
    const std::string t = to_lower(v);
    if (t == "rayleigh")
      cfg.fading = FadingKind::rayleigh;
    else if (t == "none")
      cfg.fading = FadingKind::none;
    else
      throw ConfigError("fading: expected rayleigh or none");
  } else if (key == "pulse_ul") {
    cfg.pulse_ul = to_lower(v);
  } else if (key == "pulse_dl") {
    cfg.pulse_dl = to_lower(v);
  } else if (key == "ei_tolerance") {
    cfg.ei_tolerance = detail::require_double(key, v);
    if (!(cfg.ei_tolerance > 0.0))
      throw ConfigError("ei_tolerance: must be positive");
  } else if (key == "b_hz") {
    cfg.b_hz = detail::require_double(key, v);
    if (!(cfg.b_hz > 0.0)) throw ConfigError("b_hz: must be positive");
  } else if (key == "beta_list_dbm") {
    std::vector<double> list;
    for (const std::string& item : split(v, ',')) {
      if (to_lower(trim(item)) == "off")
        list.push_back(-std::numeric_limits<double>::infinity());
      else
        list.push_back(detail::require_double(key, item));
    }
    if (list.empty()) throw ConfigError("beta_list_dbm: must not be empty");
    cfg.beta_list_dbm = list;
  } else if (key == "resolution_m") {
    cfg.resolution_m = detail::require_double(key, v);
    if (!(cfg.resolution_m > 0.0))
      throw ConfigError("resolution_m: must be positive");
  } else if (key == "ul_redraws") {
    const long long t = detail::require_int(key, v);
    if (t < 1) throw ConfigError("ul_redraws: must be at least 1");
    cfg.ul_redraws = static_cast<int>(t);
  } else if (key == "pgm") {
    cfg.pgm = detail::require_switch(key, v);
  } else if (key == "raster_fading") {
    cfg.raster_fading = detail::require_switch(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

// Cross-field checks, run once after all entries are applied.
inline void validate_config(const RunConfig& cfg) {
  if (cfg.alpha_grid.empty())
    throw ConfigError("alpha_grid: must contain at least one point");
  for (std::size_t i = 0; i < cfg.alpha_grid.size(); ++i) {
    const double a = cfg.alpha_grid[i];
    if (!(a >= 0.0 && a <= 1.0))
      throw ConfigError("alpha_grid: values must lie in [0, 1]");
    if (i > 0 && !(a > cfg.alpha_grid[i - 1]))
      throw ConfigError("alpha_grid: values must be strictly increasing");
  }
  if (dbm_to_w(cfg.rho_dbm) >= dbm_to_w(cfg.p_u_max_dbm))
    throw ConfigError(
        "rho_dbm: receive target must stay below the terminal power cap");
  parse_pulse(cfg.pulse_ul, cfg.b_hz);
  parse_pulse(cfg.pulse_dl, cfg.b_hz);
}

// Canonical key -> value map used for the manifest echo. Keys sort
// alphabetically; values round-trip through the same parser.
inline std::map<std::string, std::string> config_to_map(const RunConfig& cfg) {
  std::map<std::string, std::string> m;
  m["command"] = command_label(cfg.command);
  m["topology"] = cfg.topology.kind == TopologySpec::Kind::file
                      ? "file:" + cfg.topology.path
                      : "ppp:" + format_double(cfg.topology.density_per_m2);
  m["area_m"] = format_double(cfg.area_m);
  m["drop_mode"] = cfg.drop_mode.mode == DropSpec::Mode::per_cell_uniform
                       ? "per-cell-uniform"
                       : "ppp:" + format_double(cfg.drop_mode.density_per_m2);
  m["tag_policy"] =
      cfg.tag_policy == TagPolicy::centroid ? "centroid" : "all-cells";
  m["alpha_grid"] = detail::grid_to_string(cfg.alpha_grid);
  m["trials"] = std::to_string(cfg.trials);
  m["seed"] = std::to_string(cfg.seed);
  m["output_dir"] = cfg.output_dir;
  m["fc_ghz"] = format_double(cfg.fc_ghz);
  m["p_d_w"] = format_double(cfg.p_d_w);
  m["rho_dbm"] = format_double(cfg.rho_dbm);
  m["p_u_max_dbm"] = format_double(cfg.p_u_max_dbm);
  m["beta_dbm"] = cfg.beta_dbm ? format_double(*cfg.beta_dbm) : "off";
  m["noise_psd_dbm_hz"] =
      cfg.noise_psd_dbm_hz ? format_double(*cfg.noise_psd_dbm_hz) : "off";
  m["noise_figure_db"] = format_double(cfg.noise_figure_db);
  m["fading"] = cfg.fading == FadingKind::rayleigh ? "rayleigh" : "none";
  m["pulse_ul"] = cfg.pulse_ul;
  m["pulse_dl"] = cfg.pulse_dl;
  m["ei_tolerance"] = format_double(cfg.ei_tolerance);
  m["b_hz"] = format_double(cfg.b_hz);
  m["beta_list_dbm"] = detail::grid_to_string(cfg.beta_list_dbm);
  m["resolution_m"] = format_double(cfg.resolution_m);
  m["ul_redraws"] = std::to_string(cfg.ul_redraws);
  m["pgm"] = cfg.pgm ? "on" : "off";
  m["raster_fading"] = cfg.raster_fading ? "on" : "off";
  return m;
}

// Loads a config file. Two formats are accepted: a plain key=value file
// ('#' comments, blank lines ignored) and a manifest.json from a previous
// run, so any run can be repeated from its own manifest.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  RunConfig cfg;

  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object())
      throw ConfigError("config: manifest " + path + " lacks a config object");
    for (const auto& [key, value] : doc["config"].items()) {
      if (!value.is_string())
        throw ConfigError("config: manifest value for '" + key +
                          "' must be a string");
      apply_config_entry(cfg, key, value.get<std::string>());
    }
    validate_config(cfg);
    return cfg;
  }

  int line_no = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError(path, line_no, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

// Builds the service area, loading or generating base station sites.
inline Topology build_topology(const RunConfig& cfg) {
  const Rect area = square_area(cfg.area_m);
  if (cfg.topology.kind == TopologySpec::Kind::file)
    return load_topology(cfg.topology.path, area);
  return generate_topology_ppp(cfg.topology.density_per_m2, area, cfg.seed);
}

// Assembles the engine configuration from the resolved run description.
inline DuplexConfig make_duplex_config(const RunConfig& cfg) {
  DuplexConfig d(parse_pulse(cfg.pulse_ul, cfg.b_hz),
                 parse_pulse(cfg.pulse_dl, cfg.b_hz));
  d.b_hz = cfg.b_hz;
  d.power.p_d_w = cfg.p_d_w;
  d.power.rho_w = dbm_to_w(cfg.rho_dbm);
  d.power.p_u_max_w = dbm_to_w(cfg.p_u_max_dbm);
  d.power.beta_w = cfg.beta_dbm ? dbm_to_w(*cfg.beta_dbm) : 0.0;
  d.power.noise_psd_w_hz =
      cfg.noise_psd_dbm_hz ? dbm_to_w(*cfg.noise_psd_dbm_hz) : 0.0;
  d.power.noise_figure_db = cfg.noise_figure_db;
  d.prop.fc_ghz = cfg.fc_ghz;
  d.prop.fading = cfg.fading;
  d.drop = cfg.drop_mode;
  d.tag_policy = cfg.tag_policy;
  d.trials = cfg.trials;
  d.seed = cfg.seed;
  d.ei_tolerance = cfg.ei_tolerance;
  d.workers = cfg.workers;
  return d;
}

}  // namespace adx
