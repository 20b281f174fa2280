// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <cmath>
#include <stdexcept>

#include "adx/errors.hpp"
#include "adx/geometry.hpp"
#include "adx/rng.hpp"

namespace adx {

inline double dbm_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

inline double w_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

enum class FadingKind { none, rayleigh };

struct PropagationParams {
  double fc_ghz = 2.0;
  double min_distance_m = 1.0;
  FadingKind fading = FadingKind::rayleigh;
};

// Transmit powers and receiver noise, all in watts.
struct PowerParams {
  double p_d_w = 5.0;                          // BS transmit power
  double rho_w = dbm_to_w(-70.0);              // uplink receive target
  double p_u_max_w = dbm_to_w(23.0);           // terminal power cap
  double beta_w = 0.0;                         // residual self-interference
  double noise_psd_w_hz = dbm_to_w(-174.0);    // thermal density, 0 disables
  double noise_figure_db = 9.0;
};

// Urban micro line-of-sight attenuation in dB at distance d and carrier
// fc: 22 log10(d) + 28 + 20 log10(fc).
inline double path_loss_db(double distance_m, double fc_ghz) {
  if (!(distance_m > 0.0)) throw std::domain_error("path_loss_db: distance must be positive");
  if (!(fc_ghz > 0.0)) throw std::domain_error("path_loss_db: carrier must be positive");
  return 22.0 * std::log10(distance_m) + 28.0 + 20.0 * std::log10(fc_ghz);
}

inline double linear_gain(double distance_m, double fc_ghz) {
  return std::pow(10.0, -path_loss_db(distance_m, fc_ghz) / 10.0);
}

// Link gain between two points with the short-range clamp applied.
inline double link_gain(Point a, Point b, const PropagationParams& prop) {
  const double d = std::max(distance(a, b), prop.min_distance_m);
  return linear_gain(d, prop.fc_ghz);
}

struct UplinkPower {
  double power_w = 0.0;
  bool truncated = false;
};

// Truncated channel inversion: aim for receive level rho, cap at p_u_max.
inline UplinkPower uplink_tx_power(double distance_m, const PropagationParams& prop,
                                   double rho_w, double p_u_max_w) {
  const double d = std::max(distance_m, prop.min_distance_m);
  const double required = rho_w / linear_gain(d, prop.fc_ghz);
  if (required > p_u_max_w) return {p_u_max_w, true};
  return {required, false};
}

// Receiver noise over the widened band (1 + alpha) * B. Returns 0 when the
// thermal density is disabled.
inline double noise_power_w(double alpha, double b_hz, const PowerParams& power) {
  if (power.noise_psd_w_hz == 0.0) return 0.0;
  return power.noise_psd_w_hz * db_to_linear(power.noise_figure_db) *
         (1.0 + alpha) * b_hz;
}

// Unit-mean power fading factor drawn from a sequential stream.
inline double sample_fading(Substream& rng, FadingKind kind) {
  return kind == FadingKind::rayleigh ? rng.exponential() : 1.0;
}

// Same draw keyed by a hashed counter, for order-independent evaluation.
inline double fading_from_bits(std::uint64_t bits, FadingKind kind) {
  return kind == FadingKind::rayleigh ? exponential_from_bits(bits) : 1.0;
}

}  // namespace adx
