// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace adx {

// Purpose tags for deriving independent substreams from one master seed.
namespace stream {
inline constexpr std::uint64_t topology = 0x41;
inline constexpr std::uint64_t deploy = 0x42;
inline constexpr std::uint64_t partner = 0x43;
inline constexpr std::uint64_t fade_ul = 0x44;
inline constexpr std::uint64_t fade_dl = 0x45;
inline constexpr std::uint64_t heatmap = 0x46;
inline constexpr std::uint64_t heatmap_fade = 0x47;
}  // namespace stream

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (b * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL));
}

// Folds any number of tags into a seed, e.g. derive(seed, stream::deploy, trial).
template <class... Tags>
constexpr std::uint64_t derive(std::uint64_t seed, Tags... tags) {
  ((seed = mix(seed, static_cast<std::uint64_t>(tags))), ...);
  return seed;
}

// Uniform double in [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Unit-mean exponential variate from a single hashed counter. Draws made
// this way depend only on the counter, never on evaluation order.
inline double exponential_from_bits(std::uint64_t bits) {
  return -std::log1p(-to_unit(bits));
}

// Sequential generator for one derived substream.
class Substream {
 public:
  explicit Substream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return to_unit(engine_()); }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  double exponential() { return -std::log1p(-uniform()); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    int v = static_cast<int>(uniform() * n);
    return v < n ? v : n - 1;
  }

  // Knuth's product method, chunked so large means stay in range.
  long long poisson(double lambda) {
    long long total = 0;
    while (lambda > 0.0) {
      const double chunk = std::min(lambda, 500.0);
      const double limit = std::exp(-chunk);
      long long k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= uniform();
      } while (p > limit);
      total += k - 1;
      lambda -= chunk;
    }
    return total;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace adx
