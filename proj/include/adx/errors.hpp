// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <stdexcept>
#include <string>

namespace adx {

// Invalid configuration value or an inconsistent parameter set.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file. The message carries file and 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line_no, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line_no) + ": " + message),
        line(line_no) {}
  int line;
};

// An estimate ended up with no usable trials.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace adx
