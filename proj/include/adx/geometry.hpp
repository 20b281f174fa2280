// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "adx/errors.hpp"
#include "adx/rng.hpp"
#include "adx/util.hpp"

namespace adx {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

// Axis-aligned service area. Bounds are inclusive.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Point centroid() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(Point p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

inline Rect square_area(double side_m) { return Rect{0.0, 0.0, side_m, side_m}; }

// Fixed set of base station sites inside a service area. Cell c is the
// nearest-site region of bs[c]; ties go to the lowest index.
struct Topology {
  std::vector<Point> bs;
  Rect area;

  int n_cells() const { return static_cast<int>(bs.size()); }
};

inline void validate_topology(const Topology& topo) {
  if (topo.area.width() <= 0.0 || topo.area.height() <= 0.0)
    throw ConfigError("topology: service area must have positive extent");
  if (topo.bs.size() < 2)
    throw ConfigError("topology: need at least 2 base stations");
  for (const Point& p : topo.bs)
    if (!topo.area.contains(p))
      throw ConfigError("topology: base station outside the service area");
  for (std::size_t i = 0; i < topo.bs.size(); ++i)
    for (std::size_t j = i + 1; j < topo.bs.size(); ++j)
      if (topo.bs[i].x == topo.bs[j].x && topo.bs[i].y == topo.bs[j].y)
        throw ConfigError("topology: duplicate base station position");
}

inline Topology make_topology(std::vector<Point> bs, Rect area) {
  Topology topo{std::move(bs), area};
  validate_topology(topo);
  return topo;
}

// Reads base station sites from a CSV file with header `id,x_m,y_m`.
// Lines starting with '#' and blank lines are skipped. Rows that fall
// outside the service area are dropped (the file may cover a wider map).
inline Topology load_topology(const std::string& path, Rect area) {
  std::ifstream in(path);
  if (!in) throw ConfigError("topology: cannot open " + path);
  std::vector<Point> bs;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : body)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
      if (to_lower(compact) != "id,x_m,y_m")
        throw ParseError(path, line_no, "expected header 'id,x_m,y_m'");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> fields = split(body, ',');
    if (fields.size() != 3)
      throw ParseError(path, line_no, "expected 3 comma-separated fields");
    long long id = 0;
    Point p;
    if (!parse_int(fields[0], id))
      throw ParseError(path, line_no, "bad id '" + trim(fields[0]) + "'");
    if (!parse_double(fields[1], p.x) || !std::isfinite(p.x))
      throw ParseError(path, line_no, "bad x_m '" + trim(fields[1]) + "'");
    if (!parse_double(fields[2], p.y) || !std::isfinite(p.y))
      throw ParseError(path, line_no, "bad y_m '" + trim(fields[2]) + "'");
    if (area.contains(p)) bs.push_back(p);
  }
  if (!header_seen) throw ParseError(path, line_no, "missing header 'id,x_m,y_m'");
  return make_topology(std::move(bs), area);
}

// Draws a homogeneous Poisson point process of sites over the area.
// Redraws outright in the astronomically unlikely case of a degenerate set.
inline Topology generate_topology_ppp(double density_per_m2, Rect area,
                                      std::uint64_t seed) {
  if (!(density_per_m2 > 0.0))
    throw ConfigError("topology: ppp density must be positive");
  if (area.width() <= 0.0 || area.height() <= 0.0)
    throw ConfigError("topology: service area must have positive extent");
  Substream rng(derive(seed, stream::topology));
  for (int attempt = 0; attempt < 1024; ++attempt) {
    const long long n = rng.poisson(density_per_m2 * area.area());
    if (n < 2) continue;
    std::vector<Point> bs(static_cast<std::size_t>(n));
    for (auto& p : bs) {
      p.x = rng.uniform(area.x0, area.x1);
      p.y = rng.uniform(area.y0, area.y1);
    }
    Topology topo{std::move(bs), area};
    bool distinct = true;
    for (std::size_t i = 0; distinct && i < topo.bs.size(); ++i)
      for (std::size_t j = i + 1; j < topo.bs.size(); ++j)
        if (topo.bs[i].x == topo.bs[j].x && topo.bs[i].y == topo.bs[j].y) {
          distinct = false;
          break;
        }
    if (distinct) return topo;
  }
  throw ConfigError("topology: ppp generation failed to produce a usable draw");
}

// Index of the serving cell for a point: nearest site, lowest index on ties.
inline int associate_nearest(Point p, const Topology& topo) {
  int best = 0;
  double best_d2 = squared_distance(p, topo.bs[0]);
  for (int c = 1; c < topo.n_cells(); ++c) {
    const double d2 = squared_distance(p, topo.bs[c]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

// How user positions are drawn for each Monte Carlo trial.
struct DropSpec {
  enum class Mode { per_cell_uniform, ppp };
  Mode mode = Mode::per_cell_uniform;
  double density_per_m2 = 0.0;  // ppp only
};

// Which cells contribute victims to the statistics.
enum class TagPolicy { centroid, all_cells };

// One realization of user positions. `active_by_cell[c]` is the index of
// the user scheduled on cell c's channel pair, or -1 if the cell is silent.
struct Deployment {
  std::vector<Point> users;
  std::vector<int> serving;        // per user
  std::vector<int> active_by_cell; // per cell

  bool populated(int cell) const { return active_by_cell[cell] >= 0; }
};

namespace detail {

// Uniform draw over cell c's nearest-site region by rejection from the area.
inline Point draw_in_cell(const Topology& topo, int cell, Substream& rng) {
  for (long long it = 0; it < 100'000'000LL; ++it) {
    Point p{rng.uniform(topo.area.x0, topo.area.x1),
            rng.uniform(topo.area.y0, topo.area.y1)};
    if (associate_nearest(p, topo) == cell) return p;
  }
  throw EstimationError("deployment: rejection sampling stalled in a tiny cell");
}

}  // namespace detail

// Draws one trial's users. per_cell_uniform puts exactly one active user in
// every cell. ppp drops a Poisson field over the area, associates users to
// their nearest site and schedules one uniform pick per populated cell.
inline Deployment drop_users(const Topology& topo, const DropSpec& spec,
                             std::uint64_t rng_seed) {
  Substream rng(rng_seed);
  Deployment dep;
  dep.active_by_cell.assign(static_cast<std::size_t>(topo.n_cells()), -1);
  if (spec.mode == DropSpec::Mode::per_cell_uniform) {
    dep.users.reserve(static_cast<std::size_t>(topo.n_cells()));
    for (int c = 0; c < topo.n_cells(); ++c) {
      dep.users.push_back(detail::draw_in_cell(topo, c, rng));
      dep.serving.push_back(c);
      dep.active_by_cell[static_cast<std::size_t>(c)] =
          static_cast<int>(dep.users.size()) - 1;
    }
    return dep;
  }
  if (!(spec.density_per_m2 > 0.0))
    throw ConfigError("deployment: ppp density must be positive");
  const long long n = rng.poisson(spec.density_per_m2 * topo.area.area());
  dep.users.resize(static_cast<std::size_t>(n));
  dep.serving.resize(static_cast<std::size_t>(n));
  for (auto& p : dep.users) {
    p.x = rng.uniform(topo.area.x0, topo.area.x1);
    p.y = rng.uniform(topo.area.y0, topo.area.y1);
  }
  std::vector<std::vector<int>> members(static_cast<std::size_t>(topo.n_cells()));
  for (std::size_t u = 0; u < dep.users.size(); ++u) {
    const int c = associate_nearest(dep.users[u], topo);
    dep.serving[u] = c;
    members[static_cast<std::size_t>(c)].push_back(static_cast<int>(u));
  }
  for (int c = 0; c < topo.n_cells(); ++c) {
    auto& m = members[static_cast<std::size_t>(c)];
    if (m.empty()) continue;
    dep.active_by_cell[static_cast<std::size_t>(c)] =
        m[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(m.size())))];
  }
  return dep;
}

// Cell whose site lies closest to the area centroid.
inline int centroid_cell(const Topology& topo) {
  return associate_nearest(topo.area.centroid(), topo);
}

// Victim cells for one trial under the given policy. Silent cells never
// qualify, so a centroid pick may come back empty.
inline std::vector<int> select_tagged_cells(const Topology& topo,
                                            const Deployment& dep,
                                            TagPolicy policy) {
  std::vector<int> tagged;
  if (policy == TagPolicy::centroid) {
    const int c = centroid_cell(topo);
    if (dep.populated(c)) tagged.push_back(c);
    return tagged;
  }
  for (int c = 0; c < topo.n_cells(); ++c)
    if (dep.populated(c)) tagged.push_back(c);
  return tagged;
}

// Adds a second scheduled user per cell for the mixed-terminal mode and
// returns its user index per cell (-1 where no partner exists). Primary
// entries keep their indices; partners are appended at the back.
inline std::vector<int> drop_partners(const Topology& topo, Deployment& dep,
                                      const DropSpec& spec, std::uint64_t rng_seed) {
  Substream rng(rng_seed);
  std::vector<int> partner(static_cast<std::size_t>(topo.n_cells()), -1);
  if (spec.mode == DropSpec::Mode::per_cell_uniform) {
    for (int c = 0; c < topo.n_cells(); ++c) {
      dep.users.push_back(detail::draw_in_cell(topo, c, rng));
      dep.serving.push_back(c);
      partner[static_cast<std::size_t>(c)] = static_cast<int>(dep.users.size()) - 1;
    }
    return partner;
  }
  // ppp: pick uniformly among the cell's remaining users, if any.
  std::vector<std::vector<int>> spare(static_cast<std::size_t>(topo.n_cells()));
  for (std::size_t u = 0; u < dep.users.size(); ++u) {
    const int c = dep.serving[u];
    if (dep.active_by_cell[static_cast<std::size_t>(c)] == static_cast<int>(u)) continue;
    spare[static_cast<std::size_t>(c)].push_back(static_cast<int>(u));
  }
  for (int c = 0; c < topo.n_cells(); ++c) {
    auto& m = spare[static_cast<std::size_t>(c)];
    if (m.empty()) continue;
    partner[static_cast<std::size_t>(c)] =
        m[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(m.size())))];
  }
  return partner;
}

}  // namespace adx
