// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include "adx/channel.hpp"
#include "adx/config.hpp"
#include "adx/engine.hpp"
#include "adx/errors.hpp"
#include "adx/geometry.hpp"
#include "adx/heatmap.hpp"
#include "adx/pulse.hpp"
#include "adx/quadrature.hpp"
#include "adx/rng.hpp"
#include "adx/runner.hpp"
#include "adx/util.hpp"
