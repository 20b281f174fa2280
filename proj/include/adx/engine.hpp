// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adx/channel.hpp"
#include "adx/errors.hpp"
#include "adx/geometry.hpp"
#include "adx/pulse.hpp"
#include "adx/rng.hpp"
#include "adx/util.hpp"

namespace adx {

enum class Direction { uplink, downlink };

// fd_ue: every terminal transmits and receives on its own channel pair.
// hd_ue_backcompat: two half-duplex terminals share each cell's pair on
// mirrored assignments, so the downlink victim sees no self-interference
// but picks up every paired uplink transmitter, its own cell included.
enum class UeMode { fd_ue, hd_ue_backcompat };

struct DuplexConfig {
  DuplexConfig(PulseShape ul, PulseShape dl)
      : pulse_ul(std::move(ul)), pulse_dl(std::move(dl)) {}

  double alpha = 0.0;           // channel overlap fraction
  double b_hz = 1e6;            // half-duplex channel width
  PulseShape pulse_ul;
  PulseShape pulse_dl;
  PowerParams power;
  PropagationParams prop;
  UeMode ue_mode = UeMode::fd_ue;
  DropSpec drop;
  TagPolicy tag_policy = TagPolicy::centroid;
  int trials = 1;
  std::uint64_t seed = 1;
  double ei_tolerance = 1e-6;
  int workers = 1;
  bool cross_mode = true;       // diagnostic switch: drop cross-mode terms entirely
};

// One Monte Carlo realization: positions, uplink powers, partner layout.
struct TrialState {
  Deployment dep;
  std::vector<double> p_u_w;
  std::vector<std::uint8_t> truncated;
  std::vector<int> partner_by_cell;  // empty outside backcompat mode
};

// Per-victim fading factors for one (trial, victim, direction) evaluation.
// Entry i is the power fade on the path from user/site i to the victim.
struct FadingDraw {
  std::vector<double> user;
  std::vector<double> bs;
};

// The terms that vary along a sweep: leakage factor, residual
// self-interference, band noise and the diagnostic cross-mode switch.
struct LinkBudget {
  double ei = 0.0;
  double beta_w = 0.0;
  double noise_w = 0.0;
  bool cross_mode = true;
};

inline TrialState build_trial_state(const Topology& topo, const DuplexConfig& cfg,
                                    std::uint64_t trial) {
  TrialState st;
  st.dep = drop_users(topo, cfg.drop, derive(cfg.seed, stream::deploy, trial));
  if (cfg.ue_mode == UeMode::hd_ue_backcompat)
    st.partner_by_cell = drop_partners(topo, st.dep, cfg.drop,
                                       derive(cfg.seed, stream::partner, trial));
  st.p_u_w.resize(st.dep.users.size());
  st.truncated.resize(st.dep.users.size());
  for (std::size_t u = 0; u < st.dep.users.size(); ++u) {
    const double d = distance(st.dep.users[u], topo.bs[st.dep.serving[u]]);
    const UplinkPower p =
        uplink_tx_power(d, cfg.prop, cfg.power.rho_w, cfg.power.p_u_max_w);
    st.p_u_w[u] = p.power_w;
    st.truncated[u] = p.truncated ? 1 : 0;
  }
  return st;
}

// Fading factors for every potential source, keyed by hashed counters so a
// draw depends only on (seed, direction, trial, victim, source), never on
// how many sources exist or in which order they are visited.
inline FadingDraw fading_for(const TrialState& st, int n_cells, Direction dir,
                             int victim_cell, std::uint64_t seed, std::uint64_t trial,
                             FadingKind kind) {
  FadingDraw fd;
  fd.user.resize(st.dep.users.size());
  fd.bs.resize(static_cast<std::size_t>(n_cells));
  const std::uint64_t tag =
      dir == Direction::uplink ? stream::fade_ul : stream::fade_dl;
  for (std::size_t i = 0; i < fd.user.size(); ++i)
    fd.user[i] = fading_from_bits(derive(seed, tag, trial, victim_cell, 0, i), kind);
  for (std::size_t j = 0; j < fd.bs.size(); ++j)
    fd.bs[j] = fading_from_bits(derive(seed, tag, trial, victim_cell, 1, j), kind);
  return fd;
}

// Uplink SINR at the tagged cell's site. Same-direction users interfere at
// full strength; downlink transmitters and the site's own residual loop
// leak in scaled by the pulse overlap factor.
inline double sinr_uplink(const Topology& topo, const TrialState& st, int tagged,
                          const FadingDraw& fade, const DuplexConfig& cfg,
                          const LinkBudget& budget) {
  const int u_o = st.dep.active_by_cell[static_cast<std::size_t>(tagged)];
  const Point site = topo.bs[static_cast<std::size_t>(tagged)];
  const std::size_t uo = static_cast<std::size_t>(u_o);
  const double num = st.p_u_w[uo] * fade.user[uo] *
                     link_gain(st.dep.users[uo], site, cfg.prop);
  double intra = 0.0;
  double cross = 0.0;
  for (int c = 0; c < topo.n_cells(); ++c) {
    if (c == tagged) continue;
    const int ui = st.dep.active_by_cell[static_cast<std::size_t>(c)];
    if (ui < 0) continue;
    const std::size_t u = static_cast<std::size_t>(ui);
    intra += st.p_u_w[u] * fade.user[u] * link_gain(st.dep.users[u], site, cfg.prop);
    cross += cfg.power.p_d_w * fade.bs[static_cast<std::size_t>(c)] *
             link_gain(topo.bs[static_cast<std::size_t>(c)], site, cfg.prop);
  }
  const double leak =
      budget.cross_mode ? budget.ei * (cross + budget.beta_w) : 0.0;
  return num / (intra + leak + budget.noise_w);
}

// Downlink SINR at the tagged cell's scheduled user.
inline double sinr_downlink(const Topology& topo, const TrialState& st, int tagged,
                            const FadingDraw& fade, const DuplexConfig& cfg,
                            const LinkBudget& budget) {
  const int u_o = st.dep.active_by_cell[static_cast<std::size_t>(tagged)];
  const Point at = st.dep.users[static_cast<std::size_t>(u_o)];
  const double num = cfg.power.p_d_w * fade.bs[static_cast<std::size_t>(tagged)] *
                     link_gain(topo.bs[static_cast<std::size_t>(tagged)], at, cfg.prop);
  double intra = 0.0;
  double cross = 0.0;
  for (int c = 0; c < topo.n_cells(); ++c) {
    if (c == tagged) continue;
    const int ui = st.dep.active_by_cell[static_cast<std::size_t>(c)];
    if (ui < 0) continue;
    const std::size_t u = static_cast<std::size_t>(ui);
    intra += cfg.power.p_d_w * fade.bs[static_cast<std::size_t>(c)] *
             link_gain(topo.bs[static_cast<std::size_t>(c)], at, cfg.prop);
    cross += st.p_u_w[u] * fade.user[u] * link_gain(st.dep.users[u], at, cfg.prop);
  }
  const double leak =
      budget.cross_mode ? budget.ei * (cross + budget.beta_w) : 0.0;
  return num / (intra + leak + budget.noise_w);
}

// Downlink SINR for a half-duplex terminal on the mirrored pair: no residual
// loop of its own, but the paired uplink user of every populated cell (its
// own cell's partner included) leaks in through the pulse overlap.
inline double sinr_downlink_backcompat(const Topology& topo, const TrialState& st,
                                       int tagged, const FadingDraw& fade,
                                       const DuplexConfig& cfg,
                                       const LinkBudget& budget) {
  const int u_o = st.dep.active_by_cell[static_cast<std::size_t>(tagged)];
  const Point at = st.dep.users[static_cast<std::size_t>(u_o)];
  const double num = cfg.power.p_d_w * fade.bs[static_cast<std::size_t>(tagged)] *
                     link_gain(topo.bs[static_cast<std::size_t>(tagged)], at, cfg.prop);
  double intra = 0.0;
  double cross = 0.0;
  for (int c = 0; c < topo.n_cells(); ++c) {
    if (c != tagged) {
      const int ui = st.dep.active_by_cell[static_cast<std::size_t>(c)];
      if (ui >= 0)
        intra += cfg.power.p_d_w * fade.bs[static_cast<std::size_t>(c)] *
                 link_gain(topo.bs[static_cast<std::size_t>(c)], at, cfg.prop);
    }
    const int pi = st.partner_by_cell[static_cast<std::size_t>(c)];
    if (pi < 0) continue;
    const std::size_t p = static_cast<std::size_t>(pi);
    cross += st.p_u_w[p] * fade.user[p] * link_gain(st.dep.users[p], at, cfg.prop);
  }
  const double leak = budget.cross_mode ? budget.ei * cross : 0.0;
  return num / (intra + leak + budget.noise_w);
}

// Shannon rate over the victim's own channel width.
inline double rate_sample(double sinr, double alpha, double b_hz) {
  return (1.0 + alpha) * b_hz * std::log2(1.0 + sinr);
}

struct RateEstimate {
  double mean_bps = 0.0;
  double ci_halfwidth_bps = std::numeric_limits<double>::quiet_NaN();
  int trials_used = 0;
  bool ci_valid = false;
};

// Per-trial rate values in trial order plus skip accounting. A trial is
// skipped when the tag policy yields no victim for it.
struct RateSamples {
  std::vector<double> per_trial;
  int skipped = 0;
  int trials = 0;

  double skipped_frac() const {
    return trials > 0 ? static_cast<double>(skipped) / trials : 0.0;
  }
};

// Mean and 95% normal-approximation confidence half-width. Below 30 usable
// trials the half-width is reported as NaN and flagged invalid.
inline RateEstimate summarize(const RateSamples& samples) {
  RateEstimate est;
  est.trials_used = static_cast<int>(samples.per_trial.size());
  if (est.trials_used == 0) return est;
  double sum = 0.0;
  for (double v : samples.per_trial) sum += v;
  est.mean_bps = sum / est.trials_used;
  if (est.trials_used >= 30) {
    double ss = 0.0;
    for (double v : samples.per_trial) {
      const double d = v - est.mean_bps;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (est.trials_used - 1));
    est.ci_halfwidth_bps = 1.96 * sd / std::sqrt(static_cast<double>(est.trials_used));
    est.ci_valid = true;
  }
  return est;
}

struct RateCurve {
  std::vector<double> alphas;
  std::vector<double> ei;
  std::vector<RateEstimate> uplink;
  std::vector<RateEstimate> downlink;
  std::vector<double> skipped_frac;
};

struct BackcompatCurve {
  std::vector<double> alphas;
  std::vector<double> ei;
  std::vector<double> beta_w;                    // fd-ue residual loop grid
  std::vector<RateEstimate> uplink;              // identical in both modes
  std::vector<RateEstimate> hd_dl;               // half-duplex victim
  std::vector<std::vector<RateEstimate>> fd_dl;  // [beta][alpha]
  std::vector<double> skipped_frac;              // hd downlink skip fraction
};

// Caches the per-trial realizations once and evaluates rate statistics for
// any (direction, alpha) pair on top of them. Fading is re-keyed per
// evaluation from hashed counters, so estimates at different alphas share
// positions and powers, and results do not depend on the worker count.
class Engine {
 public:
  Engine(Topology topo, DuplexConfig cfg)
      : topo_(std::move(topo)), cfg_(std::move(cfg)) {
    if (cfg_.trials < 1) throw ConfigError("engine: trials must be at least 1");
    states_.resize(static_cast<std::size_t>(cfg_.trials));
    parallel_for(states_.size(), cfg_.workers, [&](std::size_t t) {
      states_[t] = build_trial_state(topo_, cfg_, t);
    });
  }

  const Topology& topology() const { return topo_; }
  const DuplexConfig& config() const { return cfg_; }
  const TrialState& state(std::size_t trial) const { return states_[trial]; }

  // Leakage factor between the configured pulse pair at this overlap.
  double leakage(double alpha) const {
    return effective_interference(cfg_.pulse_dl, cfg_.pulse_ul, alpha,
                                  cfg_.ei_tolerance);
  }

  RateSamples samples(Direction dir, double alpha, double ei_value) const {
    return samples(dir, alpha, ei_value, cfg_.power.beta_w);
  }

  RateSamples samples(Direction dir, double alpha, double ei_value,
                      double beta_w) const {
    const LinkBudget budget{ei_value, beta_w,
                            noise_power_w(alpha, cfg_.b_hz, cfg_.power),
                            cfg_.cross_mode};
    return collect(dir, alpha, budget, false);
  }

  // Half-duplex victim statistics; only meaningful in backcompat mode.
  RateSamples samples_backcompat_dl(double alpha, double ei_value) const {
    if (cfg_.ue_mode != UeMode::hd_ue_backcompat)
      throw ConfigError("engine: backcompat statistics need ue_mode=hd-ue-backcompat");
    const LinkBudget budget{ei_value, 0.0,
                            noise_power_w(alpha, cfg_.b_hz, cfg_.power),
                            cfg_.cross_mode};
    return collect(Direction::downlink, alpha, budget, true);
  }

  RateEstimate ergodic_rate(Direction dir, double alpha) const {
    const RateSamples s = samples(dir, alpha, leakage(alpha));
    if (s.per_trial.empty())
      throw EstimationError("engine: every trial was skipped");
    return summarize(s);
  }

  RateCurve sweep(std::span<const double> alpha_grid) const {
    RateCurve curve;
    for (double a : alpha_grid) {
      const double e = leakage(a);
      const RateSamples ul = samples(Direction::uplink, a, e);
      const RateSamples dl = samples(Direction::downlink, a, e);
      if (ul.per_trial.empty())
        throw EstimationError("engine: every trial was skipped");
      curve.alphas.push_back(a);
      curve.ei.push_back(e);
      curve.uplink.push_back(summarize(ul));
      curve.downlink.push_back(summarize(dl));
      curve.skipped_frac.push_back(ul.skipped_frac());
    }
    return curve;
  }

 private:
  // Victims for one trial. Backcompat downlink additionally needs a partner
  // in the cell, since the statistic describes the half-duplex terminal.
  std::vector<int> victims(const TrialState& st, bool backcompat_dl) const {
    std::vector<int> tagged = select_tagged_cells(topo_, st.dep, cfg_.tag_policy);
    if (!backcompat_dl) return tagged;
    std::vector<int> out;
    for (int c : tagged)
      if (st.partner_by_cell[static_cast<std::size_t>(c)] >= 0) out.push_back(c);
    return out;
  }

  RateSamples collect(Direction dir, double alpha, const LinkBudget& budget,
                      bool backcompat_dl) const {
    const std::size_t n = states_.size();
    std::vector<double> value(n, 0.0);
    std::vector<std::uint8_t> used(n, 0);
    parallel_for(n, cfg_.workers, [&](std::size_t t) {
      const TrialState& st = states_[t];
      const std::vector<int> tagged = victims(st, backcompat_dl);
      if (tagged.empty()) return;
      double sum = 0.0;
      for (int cell : tagged) {
        const FadingDraw fade =
            fading_for(st, topo_.n_cells(), dir, cell, cfg_.seed, t,
                       cfg_.prop.fading);
        double sinr = 0.0;
        if (backcompat_dl)
          sinr = sinr_downlink_backcompat(topo_, st, cell, fade, cfg_, budget);
        else if (dir == Direction::uplink)
          sinr = sinr_uplink(topo_, st, cell, fade, cfg_, budget);
        else
          sinr = sinr_downlink(topo_, st, cell, fade, cfg_, budget);
        sum += rate_sample(sinr, alpha, cfg_.b_hz);
      }
      value[t] = sum / static_cast<double>(tagged.size());
      used[t] = 1;
    });
    RateSamples out;
    out.trials = static_cast<int>(n);
    out.per_trial.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      if (used[t])
        out.per_trial.push_back(value[t]);
      else
        ++out.skipped;
    }
    return out;
  }

  Topology topo_;
  DuplexConfig cfg_;
  std::vector<TrialState> states_;
};

// Convenience wrapper matching the single-estimate entry point.
inline RateEstimate ergodic_rate(const Topology& topo, const DuplexConfig& cfg,
                                 Direction dir) {
  return Engine(topo, cfg).ergodic_rate(dir, cfg.alpha);
}

// Full mixed-terminal sweep: shared uplink, half-duplex downlink victim and
// the full-duplex downlink victim across a residual-loop grid.
inline BackcompatCurve sweep_backcompat(const Topology& topo, DuplexConfig cfg,
                                        std::span<const double> alpha_grid,
                                        std::span<const double> beta_w_grid) {
  cfg.ue_mode = UeMode::hd_ue_backcompat;
  const Engine engine(topo, cfg);
  BackcompatCurve curve;
  curve.beta_w.assign(beta_w_grid.begin(), beta_w_grid.end());
  curve.fd_dl.resize(beta_w_grid.size());
  for (double a : alpha_grid) {
    const double e = engine.leakage(a);
    const RateSamples ul = engine.samples(Direction::uplink, a, e);
    const RateSamples hd = engine.samples_backcompat_dl(a, e);
    if (ul.per_trial.empty() || hd.per_trial.empty())
      throw EstimationError("engine: every trial was skipped");
    curve.alphas.push_back(a);
    curve.ei.push_back(e);
    curve.uplink.push_back(summarize(ul));
    curve.hd_dl.push_back(summarize(hd));
    curve.skipped_frac.push_back(hd.skipped_frac());
    for (std::size_t bi = 0; bi < curve.beta_w.size(); ++bi) {
      const RateSamples fd =
          engine.samples(Direction::downlink, a, e, curve.beta_w[bi]);
      curve.fd_dl[bi].push_back(summarize(fd));
    }
  }
  return curve;
}

struct BalancedAlpha {
  double alpha = 0.0;
  double ul_gain = 0.0;
  double dl_gain = 0.0;
};

// Largest-minimum-gain point of a sweep relative to its alpha = 0 row, so
// alpha = 0 itself (gains 0, 0) is the floor: when no point improves both
// directions the result stays there. Equal minima prefer the larger summed
// gain, then the smaller alpha.
inline BalancedAlpha find_balanced_alpha(const RateCurve& curve) {
  if (curve.alphas.empty() || curve.alphas.front() != 0.0)
    throw ConfigError("balanced alpha: sweep must start at alpha = 0");
  const double u0 = curve.uplink.front().mean_bps;
  const double d0 = curve.downlink.front().mean_bps;
  auto gain = [](double r, double r0) {
    if (r0 > 0.0) return (r - r0) / r0;
    return r > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  BalancedAlpha best;
  double best_min = 0.0;
  double best_sum = 0.0;
  for (std::size_t i = 1; i < curve.alphas.size(); ++i) {
    const double ug = gain(curve.uplink[i].mean_bps, u0);
    const double dg = gain(curve.downlink[i].mean_bps, d0);
    const double m = std::min(ug, dg);
    const double s = ug + dg;
    if (m > best_min || (m == best_min && s > best_sum)) {
      best_min = m;
      best_sum = s;
      best = {curve.alphas[i], ug, dg};
    }
  }
  return best;
}

}  // namespace adx
