// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "adx/channel.hpp"
#include "adx/errors.hpp"
#include "adx/geometry.hpp"
#include "adx/rng.hpp"
#include "adx/util.hpp"

namespace adx {

enum class GridMode { downlink, uplink, fd };

inline std::string grid_mode_label(GridMode mode) {
  switch (mode) {
    case GridMode::downlink:
      return "downlink";
    case GridMode::uplink:
      return "uplink";
    case GridMode::fd:
      return "fd";
  }
  return "downlink";
}

// Aggregate interference raster over the service area. Values are linear
// watts at pixel centers; row iy = 0 is the bottom of the area.
struct InterferenceGrid {
  Rect area;
  double resolution_m = 0.0;
  GridMode mode = GridMode::downlink;
  int nx = 0;
  int ny = 0;
  std::vector<double> linear_w;  // row-major, nx * ny

  double at(int ix, int iy) const {
    return linear_w[static_cast<std::size_t>(iy) * nx + ix];
  }
  Point pixel_center(int ix, int iy) const {
    return {area.x0 + (ix + 0.5) * resolution_m, area.y0 + (iy + 0.5) * resolution_m};
  }
  double dbm_at(int ix, int iy) const { return w_to_dbm(at(ix, iy)); }
  double mean_dbm() const {
    double sum = 0.0;
    for (double w : linear_w) sum += w_to_dbm(w);
    return sum / static_cast<double>(linear_w.size());
  }
};

struct HeatmapParams {
  PropagationParams prop;
  PowerParams power;
  DropSpec drop;
  int ul_redraws = 100;
  bool with_fading = false;  // per-realization raster instead of the mean field
  int workers = 1;
};

namespace detail {

inline InterferenceGrid make_grid(const Topology& topo, GridMode mode,
                                  double resolution_m) {
  if (!(resolution_m > 0.0))
    throw ConfigError("heatmap: resolution must be positive");
  InterferenceGrid g;
  g.area = topo.area;
  g.resolution_m = resolution_m;
  g.mode = mode;
  g.nx = std::max(1, static_cast<int>(std::ceil(topo.area.width() / resolution_m)));
  g.ny = std::max(1, static_cast<int>(std::ceil(topo.area.height() / resolution_m)));
  g.linear_w.assign(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
  return g;
}

}  // namespace detail

// Downlink raster: total BS transmit power seen at each pixel. Uses the
// unit-mean fading expectation unless a per-realization raster is requested.
inline InterferenceGrid downlink_grid(const Topology& topo, double resolution_m,
                                      const HeatmapParams& params,
                                      std::uint64_t seed) {
  InterferenceGrid g = detail::make_grid(topo, GridMode::downlink, resolution_m);
  parallel_for(g.linear_w.size(), params.workers, [&](std::size_t pix) {
    const int ix = static_cast<int>(pix % g.nx);
    const int iy = static_cast<int>(pix / g.nx);
    const Point at = g.pixel_center(ix, iy);
    double sum = 0.0;
    for (int c = 0; c < topo.n_cells(); ++c) {
      double h = 1.0;
      if (params.with_fading)
        h = fading_from_bits(
            derive(seed, stream::heatmap_fade, 0, 0, pix, c), params.prop.fading);
      sum += params.power.p_d_w * h * link_gain(topo.bs[c], at, params.prop);
    }
    g.linear_w[pix] = sum;
  });
  return g;
}

// Uplink raster: power-controlled user transmissions seen at each pixel,
// averaged over `ul_redraws` independent deployments (a single one when a
// per-realization raster is requested).
inline InterferenceGrid uplink_grid(const Topology& topo, double resolution_m,
                                    const HeatmapParams& params, std::uint64_t seed) {
  InterferenceGrid g = detail::make_grid(topo, GridMode::uplink, resolution_m);
  const int redraws = params.with_fading ? 1 : std::max(1, params.ul_redraws);
  std::vector<Deployment> deployments(static_cast<std::size_t>(redraws));
  std::vector<std::vector<double>> powers(static_cast<std::size_t>(redraws));
  for (int r = 0; r < redraws; ++r) {
    Deployment dep =
        drop_users(topo, params.drop, derive(seed, stream::heatmap, r));
    std::vector<double> p(dep.users.size(), 0.0);
    for (std::size_t u = 0; u < dep.users.size(); ++u) {
      const double d = distance(dep.users[u], topo.bs[dep.serving[u]]);
      p[u] = uplink_tx_power(d, params.prop, params.power.rho_w,
                             params.power.p_u_max_w)
                 .power_w;
    }
    deployments[r] = std::move(dep);
    powers[r] = std::move(p);
  }
  parallel_for(g.linear_w.size(), params.workers, [&](std::size_t pix) {
    const int ix = static_cast<int>(pix % g.nx);
    const int iy = static_cast<int>(pix / g.nx);
    const Point at = g.pixel_center(ix, iy);
    double mean = 0.0;
    for (int r = 0; r < redraws; ++r) {
      const Deployment& dep = deployments[static_cast<std::size_t>(r)];
      const auto& p = powers[static_cast<std::size_t>(r)];
      double sum = 0.0;
      for (int c = 0; c < topo.n_cells(); ++c) {
        const int ui = dep.active_by_cell[static_cast<std::size_t>(c)];
        if (ui < 0) continue;
        const std::size_t u = static_cast<std::size_t>(ui);
        double h = 1.0;
        if (params.with_fading)
          h = fading_from_bits(derive(seed, stream::heatmap_fade, 1, r, pix, c),
                               params.prop.fading);
        sum += p[u] * h * link_gain(dep.users[u], at, params.prop);
      }
      mean += sum;
    }
    g.linear_w[pix] = mean / static_cast<double>(redraws);
  });
  return g;
}

// Aggregate full-duplex floor: the pointwise sum of the two rasters.
inline InterferenceGrid fd_grid(const InterferenceGrid& dl, const InterferenceGrid& ul) {
  if (dl.nx != ul.nx || dl.ny != ul.ny)
    throw ConfigError("heatmap: raster dimensions differ");
  InterferenceGrid g = dl;
  g.mode = GridMode::fd;
  for (std::size_t i = 0; i < g.linear_w.size(); ++i)
    g.linear_w[i] = dl.linear_w[i] + ul.linear_w[i];
  return g;
}

inline InterferenceGrid interference_grid(const Topology& topo, GridMode mode,
                                          double resolution_m,
                                          const HeatmapParams& params,
                                          std::uint64_t seed) {
  switch (mode) {
    case GridMode::downlink:
      return downlink_grid(topo, resolution_m, params, seed);
    case GridMode::uplink:
      return uplink_grid(topo, resolution_m, params, seed);
    case GridMode::fd:
      return fd_grid(downlink_grid(topo, resolution_m, params, seed),
                     uplink_grid(topo, resolution_m, params, seed));
  }
  throw ConfigError("heatmap: unknown grid mode");
}

// CSV matrix of dBm values, one row per grid row from the bottom up, with
// the raster geometry in `# key: value` comment lines.
inline void write_grid_csv(const InterferenceGrid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("heatmap: cannot write " + path);
  out << "# mode: " << grid_mode_label(g.mode) << "\n";
  out << "# resolution_m: " << format_double(g.resolution_m) << "\n";
  out << "# nx: " << g.nx << "\n";
  out << "# ny: " << g.ny << "\n";
  out << "# origin: " << format_double(g.area.x0) << "," << format_double(g.area.y0)
      << "\n";
  out << "# unit: dBm\n";
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix) out << ",";
      out << format_double(g.dbm_at(ix, iy));
    }
    out << "\n";
  }
}

// 8-bit PGM rendering, min-to-max dBm mapped to 0..255.
inline void write_grid_pgm(const InterferenceGrid& g, const std::string& path) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double w : g.linear_w) {
    const double v = w_to_dbm(w);
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("heatmap: cannot write " + path);
  out << "P2\n";
  out << "# " << grid_mode_label(g.mode) << " interference, " << format_double(lo)
      << " dBm -> 0, " << format_double(hi) << " dBm -> 255\n";
  out << g.nx << " " << g.ny << "\n255\n";
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = g.dbm_at(ix, iy);
      int level = 0;
      if (std::isfinite(v))
        level = static_cast<int>(
            std::lround(std::clamp((v - lo) / (hi - lo), 0.0, 1.0) * 255.0));
      out << level << (ix + 1 < g.nx ? " " : "\n");
    }
  }
}

}  // namespace adx
