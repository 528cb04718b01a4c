#pragma once

#include <cstdint>

#include "sptok/event.hpp"

namespace sptok {

/// A rectangular bar sweeping right across the sensor. The leading edge
/// entering column c emits +1 events down the bar's rows at
/// t0 + (c - start_col) * 1e6 / velocity; the trailing edge leaving the
/// column emits -1 events `bar_width` columns later. Optional uniform
/// Poisson noise is drawn from a seeded generator.
struct MovingBarSpec {
  std::uint32_t bar_width = 4;
  std::uint32_t bar_height = 32;
  double velocity_px_per_s = 1000.0;
  std::uint32_t start_col = 0;
  std::uint32_t top_row = 0;
  /// Number of columns the leading edge traverses.
  std::uint32_t columns = 64;
  Micros t0_us = 0;
  double noise_rate_hz = 0.0;
  std::uint64_t seed = 0;
};

/// Throws SpecOutOfBounds if the bar does not fit the geometry or the
/// kinematics are invalid. Without noise the stream holds exactly
/// 2 * bar_height * columns events.
EventStream generate_moving_bar(const MovingBarSpec& spec, SensorGeometry geometry);

/// Stationary Poisson activity concentrated on a few patches, the way
/// driving scenes concentrate events on moving objects. `active_patches`
/// patches share (1 - background_fraction) of the rate with log-normal
/// weights; the rest share the background uniformly. Defaults give roughly
/// 36k events per 50 ms on a 304 x 240 sensor.
struct PatchActivitySpec {
  SensorGeometry geometry{304, 240};
  std::uint32_t patch_size = 16;
  double events_per_window = 35'835.0;
  Micros window_us = 50'000;
  std::uint32_t active_patches = 60;
  double rate_spread = 1.0;
  double background_fraction = 0.1;
  Micros duration_us = 2'000'000;
  std::uint64_t seed = 0;
};

EventStream generate_patch_activity(const PatchActivitySpec& spec);

}  // namespace sptok
