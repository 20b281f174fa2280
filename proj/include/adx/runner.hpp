// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adx/config.hpp"
#include "adx/engine.hpp"
#include "adx/errors.hpp"
#include "adx/heatmap.hpp"
#include "adx/pulse.hpp"
#include "adx/util.hpp"

namespace adx {

struct RunResult {
  std::vector<std::string> files_written;
};

namespace detail {

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

// The manifest echoes the fully resolved config. Feeding it back through
// --config repeats the run; the worker count is deliberately absent since
// it never changes results.
inline void write_manifest(const RunConfig& cfg, RunResult& result) {
  nlohmann::json doc;
  doc["command"] = command_label(cfg.command);
  doc["config"] = config_to_map(cfg);
  const std::string path = out_path(cfg, "manifest.json");
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
  result.files_written.push_back(path);
}

inline void warn_small_ci(const RateEstimate& est, double alpha,
                          const char* which) {
  if (!est.ci_valid)
    std::cerr << "warning: " << which << " at alpha=" << format_double(alpha)
              << " has fewer than 30 usable trials; confidence interval omitted\n";
}

}  // namespace detail

inline RunResult run_ei(const RunConfig& cfg) {
  const PulseShape ul = parse_pulse(cfg.pulse_ul, cfg.b_hz);
  const PulseShape dl = parse_pulse(cfg.pulse_dl, cfg.b_hz);
  const EICurve curve = ei_curve(dl, ul, cfg.alpha_grid, cfg.ei_tolerance);
  RunResult result;
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = detail::out_path(cfg, "ei.csv");
  auto out = detail::open_out(path);
  out << "# interferer: " << curve.interferer << "\n";
  out << "# receiver: " << curve.receiver << "\n";
  out << "alpha,ei\n";
  for (std::size_t i = 0; i < curve.alphas.size(); ++i)
    out << format_double(curve.alphas[i]) << "," << format_double(curve.values[i])
        << "\n";
  result.files_written.push_back(path);
  detail::write_manifest(cfg, result);
  return result;
}

inline RunResult run_rates(const RunConfig& cfg) {
  const Topology topo = build_topology(cfg);
  const Engine engine(topo, make_duplex_config(cfg));
  const RateCurve curve = engine.sweep(cfg.alpha_grid);

  RunResult result;
  std::filesystem::create_directories(cfg.output_dir);
  const std::string csv_path = detail::out_path(cfg, "rates.csv");
  {
    auto out = detail::open_out(csv_path);
    out << "alpha,ei,ul_rate_bps,ul_ci_bps,dl_rate_bps,dl_ci_bps,skipped_frac\n";
    for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
      detail::warn_small_ci(curve.uplink[i], curve.alphas[i], "uplink");
      detail::warn_small_ci(curve.downlink[i], curve.alphas[i], "downlink");
      out << format_double(curve.alphas[i]) << "," << format_double(curve.ei[i])
          << "," << format_double(curve.uplink[i].mean_bps) << ","
          << format_double(curve.uplink[i].ci_halfwidth_bps) << ","
          << format_double(curve.downlink[i].mean_bps) << ","
          << format_double(curve.downlink[i].ci_halfwidth_bps) << ","
          << format_double(curve.skipped_frac[i]) << "\n";
    }
  }
  result.files_written.push_back(csv_path);

  nlohmann::json doc;
  doc["config"] = config_to_map(cfg);
  if (!curve.alphas.empty() && curve.alphas.front() == 0.0) {
    const BalancedAlpha star = find_balanced_alpha(curve);
    doc["alpha_star"] = {{"alpha", star.alpha},
                         {"ul_gain", star.ul_gain},
                         {"dl_gain", star.dl_gain}};
  } else {
    doc["alpha_star"] = nullptr;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
    rows.push_back({{"alpha", curve.alphas[i]},
                    {"ei", curve.ei[i]},
                    {"ul_rate_bps", curve.uplink[i].mean_bps},
                    {"ul_ci_bps", curve.uplink[i].ci_halfwidth_bps},
                    {"dl_rate_bps", curve.downlink[i].mean_bps},
                    {"dl_ci_bps", curve.downlink[i].ci_halfwidth_bps},
                    {"skipped_frac", curve.skipped_frac[i]}});
  }
  doc["curve"] = rows;
  const std::string json_path = detail::out_path(cfg, "rates.json");
  {
    auto out = detail::open_out(json_path);
    out << doc.dump(2) << "\n";
  }
  result.files_written.push_back(json_path);
  detail::write_manifest(cfg, result);
  return result;
}

inline RunResult run_backcompat(const RunConfig& cfg) {
  const Topology topo = build_topology(cfg);
  std::vector<double> beta_w;
  beta_w.reserve(cfg.beta_list_dbm.size());
  for (double b : cfg.beta_list_dbm)
    beta_w.push_back(std::isinf(b) && b < 0.0 ? 0.0 : dbm_to_w(b));
  const BackcompatCurve curve =
      sweep_backcompat(topo, make_duplex_config(cfg), cfg.alpha_grid, beta_w);

  RunResult result;
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = detail::out_path(cfg, "backcompat.csv");
  {
    auto out = detail::open_out(path);
    out << "alpha,ei,ul_rate_bps,ul_ci_bps,hd_dl_rate_bps,hd_dl_ci_bps";
    for (double b : cfg.beta_list_dbm) {
      const std::string tag = "beta_" + format_double(b);
      out << ",fd_dl_rate_bps_" << tag << ",fd_dl_ci_bps_" << tag;
    }
    out << ",skipped_frac\n";
    for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
      detail::warn_small_ci(curve.uplink[i], curve.alphas[i], "uplink");
      detail::warn_small_ci(curve.hd_dl[i], curve.alphas[i], "hd downlink");
      out << format_double(curve.alphas[i]) << "," << format_double(curve.ei[i])
          << "," << format_double(curve.uplink[i].mean_bps) << ","
          << format_double(curve.uplink[i].ci_halfwidth_bps) << ","
          << format_double(curve.hd_dl[i].mean_bps) << ","
          << format_double(curve.hd_dl[i].ci_halfwidth_bps);
      for (std::size_t bi = 0; bi < curve.fd_dl.size(); ++bi)
        out << "," << format_double(curve.fd_dl[bi][i].mean_bps) << ","
            << format_double(curve.fd_dl[bi][i].ci_halfwidth_bps);
      out << "," << format_double(curve.skipped_frac[i]) << "\n";
    }
  }
  result.files_written.push_back(path);
  detail::write_manifest(cfg, result);
  return result;
}

inline RunResult run_heatmap(const RunConfig& cfg) {
  const Topology topo = build_topology(cfg);
  const DuplexConfig d = make_duplex_config(cfg);
  HeatmapParams params;
  params.prop = d.prop;
  params.power = d.power;
  params.drop = cfg.drop_mode;
  params.ul_redraws = cfg.ul_redraws;
  params.with_fading = cfg.raster_fading;
  params.workers = cfg.workers;

  const InterferenceGrid dl =
      downlink_grid(topo, cfg.resolution_m, params, cfg.seed);
  const InterferenceGrid ul = uplink_grid(topo, cfg.resolution_m, params, cfg.seed);
  const InterferenceGrid fd = fd_grid(dl, ul);

  RunResult result;
  std::filesystem::create_directories(cfg.output_dir);
  for (const InterferenceGrid* g : {&dl, &ul, &fd}) {
    const std::string base = "heatmap_" + grid_mode_label(g->mode);
    const std::string csv_path = detail::out_path(cfg, base + ".csv");
    write_grid_csv(*g, csv_path);
    result.files_written.push_back(csv_path);
    if (cfg.pgm) {
      const std::string pgm_path = detail::out_path(cfg, base + ".pgm");
      write_grid_pgm(*g, pgm_path);
      result.files_written.push_back(pgm_path);
    }
  }

  nlohmann::json doc;
  doc["mean_dbm"] = {{"downlink", dl.mean_dbm()},
                     {"uplink", ul.mean_dbm()},
                     {"fd", fd.mean_dbm()}};
  doc["ul_dl_gap_db"] = dl.mean_dbm() - ul.mean_dbm();
  const std::string json_path = detail::out_path(cfg, "heatmap_summary.json");
  {
    auto out = detail::open_out(json_path);
    out << doc.dump(2) << "\n";
  }
  result.files_written.push_back(json_path);
  detail::write_manifest(cfg, result);
  return result;
}

inline RunResult run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::ei:
      return run_ei(cfg);
    case Command::rates:
      return run_rates(cfg);
    case Command::backcompat:
      return run_backcompat(cfg);
    case Command::heatmap:
      return run_heatmap(cfg);
  }
  throw ConfigError("unknown command");
}

}  // namespace adx
