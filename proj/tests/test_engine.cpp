// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "adx/engine.hpp"

using Catch::Approx;

namespace {

const double kB = 1e6;

adx::DuplexConfig rect_config() {
  adx::DuplexConfig cfg(adx::PulseShape::rect(kB), adx::PulseShape::rect(kB));
  cfg.b_hz = kB;
  return cfg;
}

// The two-site scenario behind the frozen hand values: sites on a 500 m
// baseline, users at 100 m on either side, channel inversion to -70 dBm.
struct TwoCell {
  adx::Topology topo = adx::make_topology({{0, 0}, {500, 0}},
                                          adx::square_area(1000.0));
  adx::TrialState st;
  adx::DuplexConfig cfg = rect_config();
  adx::FadingDraw flat;

  TwoCell() {
    cfg.power.p_d_w = 5.0;
    cfg.power.rho_w = adx::dbm_to_w(-70.0);
    cfg.power.noise_psd_w_hz = 0.0;
    cfg.prop.fading = adx::FadingKind::none;
    st.dep.users = {{100, 0}, {400, 0}};
    st.dep.serving = {0, 1};
    st.dep.active_by_cell = {0, 1};
    for (std::size_t u = 0; u < 2; ++u) {
      const double d = adx::distance(st.dep.users[u], topo.bs[st.dep.serving[u]]);
      st.p_u_w.push_back(
          adx::uplink_tx_power(d, cfg.prop, cfg.power.rho_w, cfg.power.p_u_max_w)
              .power_w);
      st.truncated.push_back(0);
    }
    flat.user = {1.0, 1.0};
    flat.bs = {1.0, 1.0};
  }
};

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

TEST_CASE("two-cell uplink SINR matches the frozen hand value") {
  TwoCell s;
  const adx::LinkBudget fd{1.0, 0.0, 0.0, true};
  const double sinr = adx::sinr_uplink(s.topo, s.st, 0, s.flat, s.cfg, fd);
  REQUIRE(to_db(sinr) == Approx(-13.600747).margin(1e-4));
}

TEST_CASE("two-cell downlink SINR matches the frozen hand value") {
  TwoCell s;
  const adx::LinkBudget fd{1.0, 0.0, 0.0, true};
  const double sinr = adx::sinr_downlink(s.topo, s.st, 0, s.flat, s.cfg, fd);
  REQUIRE(to_db(sinr) == Approx(13.234963).margin(1e-4));
}

TEST_CASE("zero leakage removes every cross-mode term") {
  TwoCell s;
  const adx::LinkBudget no_leak{0.0, 123.0, 0.0, true};
  const double sinr = adx::sinr_uplink(s.topo, s.st, 0, s.flat, s.cfg, no_leak);
  // Only the same-direction interferer remains: signal -70 dBm over
  // user 2 received at -83.245 dBm.
  REQUIRE(to_db(sinr) == Approx(13.245319809).margin(1e-4));

  adx::DuplexConfig huge = s.cfg;
  huge.power.p_d_w = 5000.0;
  REQUIRE(adx::sinr_uplink(s.topo, s.st, 0, s.flat, huge, no_leak) == sinr);
}

TEST_CASE("an isolated link collapses to pure SNR") {
  TwoCell s;
  s.st.dep.active_by_cell[1] = -1;  // silence the other cell
  const double noise = adx::noise_power_w(0.0, kB, [] {
    adx::PowerParams p;
    return p;
  }());
  const adx::LinkBudget hd{0.0, 0.0, noise, true};
  const double ul = adx::sinr_uplink(s.topo, s.st, 0, s.flat, s.cfg, hd);
  REQUIRE(to_db(ul) == Approx(35.0).margin(1e-6));  // -70 dBm over -105 dBm

  const double dl = adx::sinr_downlink(s.topo, s.st, 0, s.flat, s.cfg, hd);
  const double expected =
      s.cfg.power.p_d_w * adx::linear_gain(100.0, 2.0) / noise;
  REQUIRE(dl == Approx(expected).epsilon(1e-12));
}

TEST_CASE("common scaling of powers and noise cancels out") {
  TwoCell s;
  const double noise = 1e-13;
  const adx::LinkBudget base{0.37, 0.0, noise, true};
  const double before = adx::sinr_uplink(s.topo, s.st, 0, s.flat, s.cfg, base);

  const double k = 7.25;
  adx::TrialState scaled = s.st;
  for (double& p : scaled.p_u_w) p *= k;
  adx::DuplexConfig cfg2 = s.cfg;
  cfg2.power.p_d_w *= k;
  const adx::LinkBudget stretched{0.37, 0.0, noise * k, true};
  const double after = adx::sinr_uplink(s.topo, scaled, 0, s.flat, cfg2, stretched);
  REQUIRE(after == Approx(before).epsilon(1e-12));
}

TEST_CASE("uplink SINR never improves as leakage or the loop grows") {
  TwoCell s;
  const double noise = 1e-14;
  double prev = std::numeric_limits<double>::infinity();
  for (double e : {0.0, 0.1, 0.3, 0.6, 1.0}) {
    const double v =
        adx::sinr_uplink(s.topo, s.st, 0, s.flat, s.cfg, {e, 1e-9, noise, true});
    REQUIRE(v <= prev);
    prev = v;
  }
  prev = std::numeric_limits<double>::infinity();
  for (double beta : {0.0, 1e-10, 1e-8, 1e-6}) {
    const double v =
        adx::sinr_uplink(s.topo, s.st, 0, s.flat, s.cfg, {0.5, beta, noise, true});
    REQUIRE(v <= prev);
    prev = v;
  }
}

TEST_CASE("mixed-terminal downlink drops the loop and hears partners") {
  TwoCell s;
  s.st.partner_by_cell = {-1, 1};
  const adx::LinkBudget overlap{0.8, 0.0, 1e-15, true};

  // When every other cell's partner is its primary transmitter and the
  // victim's cell has none, the cross-mode population matches the plain
  // downlink's, so at beta = 0 the two agree bit for bit.
  REQUIRE(adx::sinr_downlink_backcompat(s.topo, s.st, 0, s.flat, s.cfg, overlap) ==
          adx::sinr_downlink(s.topo, s.st, 0, s.flat, s.cfg, overlap));

  // The loop level never enters the mixed-terminal victim.
  const adx::LinkBudget with_loop{0.8, 55.0, 1e-15, true};
  REQUIRE(adx::sinr_downlink_backcompat(s.topo, s.st, 0, s.flat, s.cfg, with_loop) ==
          adx::sinr_downlink_backcompat(s.topo, s.st, 0, s.flat, s.cfg, overlap));

  // A partner close to the victim dominates the denominator.
  adx::TrialState crowded = s.st;
  crowded.dep.users.push_back({100.5, 0.0});
  crowded.dep.serving.push_back(0);
  crowded.p_u_w.push_back(0.2);
  crowded.truncated.push_back(0);
  crowded.partner_by_cell = {2, -1};
  adx::FadingDraw fade = s.flat;
  fade.user.push_back(1.0);
  const double near = adx::sinr_downlink_backcompat(s.topo, crowded, 0, fade,
                                                    s.cfg, overlap);
  const double far =
      adx::sinr_downlink_backcompat(s.topo, s.st, 0, s.flat, s.cfg, overlap);
  REQUIRE(near < 1e-3 * far);

  // At zero overlap the partner disappears entirely.
  const adx::LinkBudget none{0.0, 0.0, 1e-15, true};
  REQUIRE(adx::sinr_downlink_backcompat(s.topo, crowded, 0, fade, s.cfg, none) ==
          adx::sinr_downlink(s.topo, s.st, 0, s.flat, s.cfg, none));
}

TEST_CASE("rate samples follow the widened-band Shannon formula") {
  REQUIRE(adx::rate_sample(0.0, 0.3, kB) == 0.0);
  REQUIRE(adx::rate_sample(1.0, 0.0, kB) == 1e6);
  REQUIRE(adx::rate_sample(3.0, 1.0, kB) == 4e6);
}

TEST_CASE("summary statistics and the small-sample guard") {
  adx::RateSamples degenerate;
  degenerate.trials = 40;
  degenerate.per_trial.assign(40, 2.5e6);
  const adx::RateEstimate d = adx::summarize(degenerate);
  REQUIRE(d.mean_bps == 2.5e6);
  REQUIRE(d.ci_halfwidth_bps == 0.0);
  REQUIRE(d.ci_valid);

  adx::RateSamples few;
  few.trials = 10;
  few.per_trial.assign(10, 1.0);
  const adx::RateEstimate f = adx::summarize(few);
  REQUIRE(f.mean_bps == 1.0);
  REQUIRE_FALSE(f.ci_valid);
  REQUIRE(std::isnan(f.ci_halfwidth_bps));

  const adx::RateEstimate empty = adx::summarize(adx::RateSamples{});
  REQUIRE(empty.trials_used == 0);

  // Quadrupling the sample count halves the confidence interval.
  adx::Substream rng(5);
  adx::RateSamples small, large;
  small.trials = 2000;
  large.trials = 8000;
  for (int i = 0; i < 2000; ++i) small.per_trial.push_back(rng.exponential());
  adx::Substream rng2(6);
  for (int i = 0; i < 8000; ++i) large.per_trial.push_back(rng2.exponential());
  const double ratio = adx::summarize(large).ci_halfwidth_bps /
                       adx::summarize(small).ci_halfwidth_bps;
  REQUIRE(ratio == Approx(0.5).margin(0.1));

  // Re-aggregation: the reported mean is the plain sample mean.
  double sum = 0.0;
  for (double v : small.per_trial) sum += v;
  REQUIRE(adx::summarize(small).mean_bps == sum / small.per_trial.size());
}

TEST_CASE("engine results do not depend on the worker count") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 17);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 64;
  cfg.seed = 9;
  cfg.workers = 1;
  const adx::Engine serial(topo, cfg);
  cfg.workers = 5;
  const adx::Engine parallel(topo, cfg);
  for (double alpha : {0.0, 0.5, 1.0}) {
    const double e = serial.leakage(alpha);
    for (adx::Direction dir : {adx::Direction::uplink, adx::Direction::downlink}) {
      const adx::RateSamples a = serial.samples(dir, alpha, e);
      const adx::RateSamples b = parallel.samples(dir, alpha, e);
      REQUIRE(a.per_trial == b.per_trial);
      REQUIRE(a.skipped == b.skipped);
    }
  }
}

TEST_CASE("the zero-overlap run matches a build with cross-mode paths disabled") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 23);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 48;
  cfg.seed = 31;
  cfg.power.beta_w = adx::dbm_to_w(-40.0);
  const adx::Engine with_cross(topo, cfg);
  cfg.cross_mode = false;
  const adx::Engine without(topo, cfg);

  REQUIRE(with_cross.leakage(0.0) == 0.0);
  for (adx::Direction dir : {adx::Direction::uplink, adx::Direction::downlink}) {
    const adx::RateSamples a = with_cross.samples(dir, 0.0, 0.0);
    const adx::RateSamples b = without.samples(dir, 0.0, 0.0);
    REQUIRE(a.per_trial == b.per_trial);
  }
}

TEST_CASE("at zero overlap each direction ignores the other's powers") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 29);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 32;
  cfg.seed = 3;
  const adx::Engine base(topo, cfg);

  adx::DuplexConfig loud = cfg;
  loud.power.p_d_w = 900.0;
  const adx::Engine loud_dl(topo, loud);
  REQUIRE(base.samples(adx::Direction::uplink, 0.0, 0.0).per_trial ==
          loud_dl.samples(adx::Direction::uplink, 0.0, 0.0).per_trial);

  adx::DuplexConfig hot = cfg;
  hot.power.rho_w = adx::dbm_to_w(-50.0);
  const adx::Engine hot_ul(topo, hot);
  REQUIRE(base.samples(adx::Direction::downlink, 0.0, 0.0).per_trial ==
          hot_ul.samples(adx::Direction::downlink, 0.0, 0.0).per_trial);
}

TEST_CASE("sweep endpoints are the half- and full-duplex operating points") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 41);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 40;
  cfg.seed = 2;
  const adx::Engine engine(topo, cfg);
  const std::vector<double> grid = {0.0, 1.0};
  const adx::RateCurve curve = engine.sweep(grid);
  REQUIRE(curve.ei[0] == 0.0);
  REQUIRE(curve.ei[1] == Approx(1.0).margin(1e-6));
  REQUIRE(curve.alphas == grid);
  REQUIRE(curve.skipped_frac[0] == 0.0);

  // Same seed reruns bit-identically.
  const adx::RateCurve again = engine.sweep(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(curve.uplink[i].mean_bps == again.uplink[i].mean_bps);
    REQUIRE(curve.downlink[i].mean_bps == again.downlink[i].mean_bps);
  }
}

TEST_CASE("paired draws keep the downlink nondecreasing without cross pressure") {
  const adx::Topology topo = adx::make_topology({{250, 500}, {750, 500}},
                                                adx::square_area(1000.0));
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 256;
  cfg.seed = 77;
  cfg.power.rho_w = adx::dbm_to_w(-150.0);  // uplink whisper: E*C stays tiny
  cfg.power.noise_psd_w_hz = 0.0;
  cfg.prop.fading = adx::FadingKind::none;
  const adx::Engine engine(topo, cfg);
  double prev = 0.0;
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double mean =
        adx::summarize(engine.samples(adx::Direction::downlink, alpha,
                                      engine.leakage(alpha)))
            .mean_bps;
    REQUIRE(mean >= prev);
    prev = mean;
  }
}

TEST_CASE("uplink statistics are shared between terminal modes bit-exactly") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 53);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 48;
  cfg.seed = 13;
  cfg.power.beta_w = adx::dbm_to_w(-40.0);
  const adx::Engine fd(topo, cfg);
  adx::DuplexConfig mixed = cfg;
  mixed.ue_mode = adx::UeMode::hd_ue_backcompat;
  const adx::Engine hd(topo, mixed);
  for (double alpha : {0.0, 0.4, 1.0}) {
    const double e = fd.leakage(alpha);
    REQUIRE(fd.samples(adx::Direction::uplink, alpha, e).per_trial ==
            hd.samples(adx::Direction::uplink, alpha, e).per_trial);
  }
  REQUIRE_THROWS_AS(fd.samples_backcompat_dl(0.5, 0.5), adx::ConfigError);
}

TEST_CASE("skip accounting tracks silent tagged cells") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 67);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 200;
  cfg.seed = 19;
  cfg.drop.mode = adx::DropSpec::Mode::ppp;
  cfg.drop.density_per_m2 = 5e-6;  // sparse: the tagged cell is often empty
  const adx::Engine engine(topo, cfg);
  const adx::RateSamples s = engine.samples(adx::Direction::uplink, 0.0, 0.0);
  REQUIRE(s.trials == 200);
  REQUIRE(static_cast<int>(s.per_trial.size()) + s.skipped == 200);
  REQUIRE(s.skipped > 0);
  REQUIRE(s.per_trial.size() > 0);
  REQUIRE(s.skipped_frac() == Approx(static_cast<double>(s.skipped) / 200.0));
}

TEST_CASE("a fully silent run raises an estimation error") {
  const adx::Topology topo = adx::generate_topology_ppp(8e-6, adx::square_area(1000.0), 71);
  adx::DuplexConfig cfg = rect_config();
  cfg.trials = 10;
  cfg.seed = 5;
  cfg.drop.mode = adx::DropSpec::Mode::ppp;
  cfg.drop.density_per_m2 = 1e-9;  // one user per thousand trials
  const adx::Engine engine(topo, cfg);
  REQUIRE_THROWS_AS(engine.ergodic_rate(adx::Direction::uplink, 0.0),
                    adx::EstimationError);
}

TEST_CASE("balanced-alpha selection maximizes the worse gain") {
  auto curve_from = [](std::vector<double> alphas, std::vector<double> ul,
                       std::vector<double> dl) {
    adx::RateCurve c;
    c.alphas = std::move(alphas);
    for (double v : ul) {
      adx::RateEstimate e;
      e.mean_bps = v;
      c.uplink.push_back(e);
    }
    for (double v : dl) {
      adx::RateEstimate e;
      e.mean_bps = v;
      c.downlink.push_back(e);
    }
    return c;
  };

  // Gains cross: min-gain peaks in the middle.
  const adx::RateCurve crossing = curve_from(
      {0.0, 0.25, 0.5, 1.0}, {10.0, 13.0, 12.0, 5.0}, {10.0, 11.0, 12.5, 14.0});
  const adx::BalancedAlpha mid = adx::find_balanced_alpha(crossing);
  REQUIRE(mid.alpha == 0.5);
  REQUIRE(mid.ul_gain == Approx(0.2));
  REQUIRE(mid.dl_gain == Approx(0.25));

  // Uplink only loses: stay at the half-duplex point.
  const adx::BalancedAlpha stay = adx::find_balanced_alpha(curve_from(
      {0.0, 0.5, 1.0}, {10.0, 8.0, 2.0}, {10.0, 12.0, 14.0}));
  REQUIRE(stay.alpha == 0.0);
  REQUIRE(stay.ul_gain == 0.0);
  REQUIRE(stay.dl_gain == 0.0);

  // Uplink flat, downlink improving: take the full-duplex end.
  const adx::BalancedAlpha top = adx::find_balanced_alpha(curve_from(
      {0.0, 0.5, 1.0}, {10.0, 10.0, 10.0}, {10.0, 12.0, 14.0}));
  REQUIRE(top.alpha == 1.0);
  REQUIRE(top.dl_gain == Approx(0.4));

  const adx::RateCurve headless = curve_from({0.5, 1.0}, {1.0, 2.0}, {1.0, 2.0});
  REQUIRE_THROWS_AS(adx::find_balanced_alpha(headless), adx::ConfigError);
}
