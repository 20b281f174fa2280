// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "adx/channel.hpp"

using Catch::Approx;

TEST_CASE("dbm and watt conversions round-trip") {
  REQUIRE(adx::dbm_to_w(0.0) == Approx(1e-3).epsilon(1e-15));
  REQUIRE(adx::dbm_to_w(30.0) == Approx(1.0).epsilon(1e-15));
  REQUIRE(adx::w_to_dbm(1.0) == Approx(30.0).margin(1e-12));
  for (double dbm : {-174.0, -70.0, -40.0, 0.0, 23.0, 37.0})
    REQUIRE(adx::w_to_dbm(adx::dbm_to_w(dbm)) == Approx(dbm).margin(1e-10));
}

TEST_CASE("path loss matches the urban line-of-sight law") {
  REQUIRE(adx::path_loss_db(1.0, 1.0) == Approx(28.0).margin(1e-12));
  REQUIRE(adx::path_loss_db(100.0, 2.0) == Approx(78.02059991327962).margin(1e-9));
  REQUIRE(adx::path_loss_db(300.0, 2.0) == Approx(88.51726751711220).margin(1e-9));
  REQUIRE(adx::path_loss_db(400.0, 2.0) == Approx(91.26591972249480).margin(1e-9));
  REQUIRE(adx::path_loss_db(500.0, 2.0) == Approx(93.39794000867204).margin(1e-9));
}

TEST_CASE("path loss rejects non-positive inputs") {
  REQUIRE_THROWS_AS(adx::path_loss_db(0.0, 2.0), std::domain_error);
  REQUIRE_THROWS_AS(adx::path_loss_db(-5.0, 2.0), std::domain_error);
  REQUIRE_THROWS_AS(adx::path_loss_db(10.0, 0.0), std::domain_error);
}

TEST_CASE("linear gain is consistent with the dB law") {
  REQUIRE(adx::linear_gain(1.0, 1.0) == Approx(1.5848931924611134e-3).epsilon(1e-12));
  // Doubling distance scales the gain by 2^-2.2 regardless of carrier.
  const double ratio = adx::linear_gain(200.0, 2.0) / adx::linear_gain(100.0, 2.0);
  REQUIRE(ratio == Approx(0.21763764082403103).epsilon(1e-12));
  for (double d : {1.0, 10.0, 157.3, 1000.0})
    REQUIRE(-10.0 * std::log10(adx::linear_gain(d, 2.0)) ==
            Approx(adx::path_loss_db(d, 2.0)).epsilon(1e-12));
}

TEST_CASE("link gain applies the short-range clamp") {
  const adx::PropagationParams prop;
  const adx::Point a{0.0, 0.0};
  REQUIRE(adx::link_gain(a, adx::Point{0.2, 0.0}, prop) ==
          adx::link_gain(a, adx::Point{1.0, 0.0}, prop));
  REQUIRE(adx::link_gain(a, adx::Point{100.0, 0.0}, prop) ==
          Approx(adx::linear_gain(100.0, prop.fc_ghz)).epsilon(1e-15));
}

TEST_CASE("uplink power inverts the channel up to the cap") {
  const adx::PropagationParams prop;
  const double rho = adx::dbm_to_w(-70.0);
  const double cap = adx::dbm_to_w(23.0);

  const adx::UplinkPower at100 = adx::uplink_tx_power(100.0, prop, rho, cap);
  REQUIRE_FALSE(at100.truncated);
  REQUIRE(adx::w_to_dbm(at100.power_w) == Approx(8.020599913279625).margin(1e-9));
  // Received level hits the target exactly for non-truncated users.
  REQUIRE(at100.power_w * adx::linear_gain(100.0, prop.fc_ghz) ==
          Approx(rho).epsilon(1e-14));

  const adx::UplinkPower at400 = adx::uplink_tx_power(400.0, prop, rho, cap);
  REQUIRE_FALSE(at400.truncated);
  const adx::UplinkPower at500 = adx::uplink_tx_power(500.0, prop, rho, cap);
  REQUIRE(at500.truncated);
  REQUIRE(at500.power_w == cap);
}

TEST_CASE("truncated-user count never drops as the target rises") {
  const adx::PropagationParams prop;
  const double cap = adx::dbm_to_w(23.0);
  const std::vector<double> distances = {30.0,  80.0,  150.0, 260.0, 340.0,
                                         410.0, 480.0, 520.0, 610.0, 700.0};
  int previous = 0;
  for (double rho_dbm = -90.0; rho_dbm <= -40.0; rho_dbm += 2.0) {
    int truncated = 0;
    for (double d : distances)
      if (adx::uplink_tx_power(d, prop, adx::dbm_to_w(rho_dbm), cap).truncated)
        ++truncated;
    REQUIRE(truncated >= previous);
    previous = truncated;
  }
}

TEST_CASE("noise power scales with the widened band") {
  adx::PowerParams power;
  const double b = 1e6;
  REQUIRE(adx::w_to_dbm(adx::noise_power_w(0.0, b, power)) ==
          Approx(-105.0).margin(1e-10));
  // Exactly double at full overlap.
  REQUIRE(adx::noise_power_w(1.0, b, power) == 2.0 * adx::noise_power_w(0.0, b, power));

  adx::PowerParams identity;
  identity.noise_psd_w_hz = 1e-20;
  identity.noise_figure_db = 0.0;
  REQUIRE(adx::noise_power_w(0.0, 1.0, identity) == Approx(1e-20).epsilon(1e-15));

  adx::PowerParams off;
  off.noise_psd_w_hz = 0.0;
  REQUIRE(adx::noise_power_w(0.7, b, off) == 0.0);
}

TEST_CASE("fading draws are unit-mean exponential") {
  adx::Substream rng(12345);
  double sum = 0.0;
  int above_one = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double h = adx::sample_fading(rng, adx::FadingKind::rayleigh);
    REQUIRE(h >= 0.0);
    sum += h;
    if (h > 1.0) ++above_one;
  }
  REQUIRE(sum / n == Approx(1.0).margin(0.01));
  REQUIRE(static_cast<double>(above_one) / n ==
          Approx(0.36787944117144233).margin(0.005));

  adx::Substream flat(99);
  REQUIRE(adx::sample_fading(flat, adx::FadingKind::none) == 1.0);
}

TEST_CASE("counter-keyed fading depends only on the counter") {
  const double a = adx::fading_from_bits(adx::derive(7, 1, 2, 3), adx::FadingKind::rayleigh);
  const double b = adx::fading_from_bits(adx::derive(7, 1, 2, 3), adx::FadingKind::rayleigh);
  const double c = adx::fading_from_bits(adx::derive(7, 1, 2, 4), adx::FadingKind::rayleigh);
  REQUIRE(a == b);
  REQUIRE(a != c);
  REQUIRE(adx::fading_from_bits(42, adx::FadingKind::none) == 1.0);
}
