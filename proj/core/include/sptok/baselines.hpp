#pragma once

#include <cstdint>

#include "sptok/event.hpp"
#include "sptok/token.hpp"

namespace sptok {

struct VoxelConfig {
  std::uint32_t patch_size = 16;
  Micros duration_us = 50'000;
  /// Voxels with fewer events are dropped.
  std::uint32_t min_events = 1;

  void validate() const;
};

struct FrameConfig {
  std::uint32_t patch_size = 16;
  Micros duration_us = 50'000;

  void validate() const;
};

/// Groups events by (patch_x, patch_y, floor(t / D)). Each surviving voxel
/// becomes a token stamped with its bin end (k + 1) * D. Bins anchor at t = 0.
TokenStream voxelize(const EventStream& stream, const VoxelConfig& cfg);

/// Dense frame patches: one token per grid cell per window, empty or not,
/// stamped with the window end. Windows cover every bin from the first to
/// the last event; an empty stream yields no windows.
TokenStream frame_patches(const EventStream& stream, const FrameConfig& cfg);

/// As above, for an explicit range. Windows are the bins k with
/// k * D in [floor(begin / D) * D, end).
TokenStream frame_patches(const EventStream& stream, const FrameConfig& cfg, TimeRange range);

}  // namespace sptok
