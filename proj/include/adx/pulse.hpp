// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adx/errors.hpp"
#include "adx/quadrature.hpp"
#include "adx/util.hpp"

namespace adx {

enum class PulseKind { rect, rrc, gauss, sinc };

// Baseband spectral magnitude template of a transmit pulse: even,
// nonnegative, zero outside [-B/2, B/2] and normalized to unit energy.
class PulseShape {
 public:
  static PulseShape rect(double b_hz) { return PulseShape(PulseKind::rect, b_hz, 0.0); }

  // Root raised cosine magnitude with symbol time T = (1 + rolloff) / B, so
  // the full transition band just fits inside the channel.
  static PulseShape root_raised_cosine(double b_hz, double rolloff) {
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
      throw ConfigError("pulse: rrc rolloff must lie in [0, 1]");
    return PulseShape(PulseKind::rrc, b_hz, rolloff);
  }

  // Gaussian magnitude with standard deviation fraction * B / 2, clipped at
  // the channel edge.
  static PulseShape gaussian(double b_hz, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
      throw ConfigError("pulse: gauss fraction must lie in (0, 1]");
    return PulseShape(PulseKind::gauss, b_hz, fraction);
  }

  // Main lobe of sinc(2 f / B), i.e. a time-domain rectangle truncated to
  // the channel.
  static PulseShape sinc_main_lobe(double b_hz) {
    return PulseShape(PulseKind::sinc, b_hz, 0.0);
  }

  double operator()(double f_hz) const { return scale_ * raw(f_hz); }

  double bandwidth_hz() const { return b_; }
  PulseKind kind() const { return kind_; }
  double shape_param() const { return param_; }

  // Abscissae where the magnitude loses smoothness, used as mandatory
  // quadrature panel boundaries.
  std::vector<double> breakpoints() const {
    const double half = 0.5 * b_;
    switch (kind_) {
      case PulseKind::rect:
        return {-half, half};
      case PulseKind::rrc: {
        if (param_ == 0.0) return {-half, half};
        const double t = (1.0 + param_) / b_;
        const double f1 = (1.0 - param_) / (2.0 * t);
        return {-half, -f1, f1, half};
      }
      case PulseKind::gauss:
      case PulseKind::sinc:
        return {-half, 0.0, half};
    }
    return {-half, half};
  }

  std::string label() const {
    switch (kind_) {
      case PulseKind::rect:
        return "rect";
      case PulseKind::rrc:
        return "rrc:" + format_double(param_);
      case PulseKind::gauss:
        return "gauss:" + format_double(param_);
      case PulseKind::sinc:
        return "sinc";
    }
    return "rect";
  }

 private:
  PulseShape(PulseKind kind, double b_hz, double param)
      : kind_(kind), b_(b_hz), param_(param) {
    if (!(b_hz > 0.0)) throw ConfigError("pulse: bandwidth must be positive");
    const double energy = integrate([this](double f) { return raw(f) * raw(f); },
                                    -0.5 * b_, 0.5 * b_, breakpoints(), 1e-12);
    scale_ = 1.0 / std::sqrt(energy);
  }

  double raw(double f) const {
    const double a = std::abs(f);
    if (a > 0.5 * b_) return 0.0;
    switch (kind_) {
      case PulseKind::rect:
        return 1.0;
      case PulseKind::rrc: {
        const double t = (1.0 + param_) / b_;
        if (param_ == 0.0) return std::sqrt(t);
        const double f1 = (1.0 - param_) / (2.0 * t);
        if (a <= f1) return std::sqrt(t);
        const double c = std::cos(std::numbers::pi * t / param_ * (a - f1));
        return std::sqrt(std::max(0.0, 0.5 * t * (1.0 + c)));
      }
      case PulseKind::gauss: {
        const double sigma = 0.5 * param_ * b_;
        const double z = f / sigma;
        return std::exp(-0.5 * z * z);
      }
      case PulseKind::sinc: {
        const double x = 2.0 * f / b_;
        if (x == 0.0) return 1.0;
        const double px = std::numbers::pi * x;
        return std::max(0.0, std::sin(px) / px);
      }
    }
    return 0.0;
  }

  PulseKind kind_;
  double b_;
  double param_;
  double scale_ = 1.0;
};

// Parses a pulse token: rect | rrc:<rolloff> | gauss:<fraction> | sinc.
inline PulseShape parse_pulse(std::string_view text, double b_hz) {
  const std::string t = to_lower(trim(text));
  if (t == "rect") return PulseShape::rect(b_hz);
  if (t == "sinc") return PulseShape::sinc_main_lobe(b_hz);
  const std::size_t colon = t.find(':');
  if (colon != std::string::npos) {
    const std::string head = t.substr(0, colon);
    double param = 0.0;
    if (!parse_double(t.substr(colon + 1), param))
      throw ConfigError("pulse: bad parameter in '" + std::string(text) + "'");
    if (head == "rrc") return PulseShape::root_raised_cosine(b_hz, param);
    if (head == "gauss") return PulseShape::gaussian(b_hz, param);
  }
  throw ConfigError("pulse: unknown shape '" + std::string(text) +
                    "' (expected rect | rrc:<r> | gauss:<f> | sinc)");
}

// Fraction of an interferer's power that leaks into a receiver whose channel
// is offset by (1 - alpha) * B: the overlap integral of the interferer
// template x, shifted to its own channel center, against the receive
// template h. 0 at alpha = 0 for strictly banded templates; 1 at alpha = 1
// for matched ones.
inline double effective_interference(const PulseShape& x, const PulseShape& h,
                                     double alpha, double rel_tol = 1e-6) {
  if (x.bandwidth_hz() != h.bandwidth_hz())
    throw ConfigError("effective_interference: pulse bandwidths differ");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("effective_interference: alpha must lie in [0, 1]");
  if (!(rel_tol > 0.0))
    throw ConfigError("effective_interference: tolerance must be positive");
  const double b = x.bandwidth_hz();
  const double shift = (1.0 - alpha) * b;
  const double lo = std::max(-0.5 * b, shift - 0.5 * b);
  const double hi = std::min(0.5 * b, shift + 0.5 * b);
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts = h.breakpoints();
  for (double c : x.breakpoints()) cuts.push_back(c + shift);
  const double value = integrate(
      [&](double f) { return x(f - shift) * h(f); }, lo, hi, std::move(cuts), rel_tol);
  return std::clamp(value, 0.0, 1.0);
}

struct EICurve {
  std::vector<double> alphas;
  std::vector<double> values;
  std::string interferer;
  std::string receiver;
};

// Leakage factor across a grid of overlap fractions.
inline EICurve ei_curve(const PulseShape& x, const PulseShape& h,
                        std::span<const double> alphas, double rel_tol = 1e-6) {
  EICurve curve;
  curve.interferer = x.label();
  curve.receiver = h.label();
  curve.alphas.assign(alphas.begin(), alphas.end());
  curve.values.reserve(alphas.size());
  for (double a : alphas)
    curve.values.push_back(effective_interference(x, h, a, rel_tol));
  return curve;
}

}  // namespace adx
