#include "sptok/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sptok {
namespace {

void require(bool ok, const char* field, const char* why) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, std::string(field) + ": " + why);
}

}  // namespace

void VoxelConfig::validate() const {
  require(patch_size >= 1, "patch_size", "must be >= 1");
  require(duration_us >= 1, "duration_us", "must be >= 1");
  require(min_events >= 1, "min_events", "must be >= 1");
}

void FrameConfig::validate() const {
  require(patch_size >= 1, "patch_size", "must be >= 1");
  require(duration_us >= 1, "duration_us", "must be >= 1");
}

TokenStream voxelize(const EventStream& stream, const VoxelConfig& cfg) {
  cfg.validate();
  const PatchGrid grid(stream.geometry(), cfg.patch_size);
  TokenStream out{stream.geometry(), cfg.patch_size, {}};

  // Events arrive in time order, so voxels of one bin are complete as soon
  // as the next bin starts. `slot[i]` indexes the open voxel of patch i.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> slot(grid.size(), kNone);
  std::vector<std::size_t> touched;
  std::vector<std::vector<Event>> open;

  auto flush = [&](Micros bin) {
    std::sort(touched.begin(), touched.end());
    for (std::size_t linear : touched) {
      auto& group = open[slot[linear]];
      if (group.size() >= cfg.min_events) {
        const PatchCoord c = grid.coord(linear);
        out.tokens.push_back(Token{c.x, c.y, (bin + 1) * cfg.duration_us, std::move(group)});
      }
      slot[linear] = kNone;
    }
    touched.clear();
    open.clear();
  };

  Micros current_bin = 0;
  bool any = false;
  for (const Event& e : stream) {
    const Micros bin = e.t / cfg.duration_us;
    if (any && bin != current_bin) flush(current_bin);
    current_bin = bin;
    any = true;
    const std::size_t linear = grid.linear(patch_index(e.x, e.y, cfg.patch_size));
    if (slot[linear] == kNone) {
      slot[linear] = open.size();
      open.emplace_back();
      touched.push_back(linear);
    }
    open[slot[linear]].push_back(e);
  }
  if (any) flush(current_bin);
  return out;
}

TokenStream frame_patches(const EventStream& stream, const FrameConfig& cfg) {
  cfg.validate();
  return frame_patches(stream, cfg, stream.span());
}

TokenStream frame_patches(const EventStream& stream, const FrameConfig& cfg, TimeRange range) {
  cfg.validate();
  const PatchGrid grid(stream.geometry(), cfg.patch_size);
  TokenStream out{stream.geometry(), cfg.patch_size, {}};
  if (range.empty()) return out;

  const Micros first_bin = range.begin / cfg.duration_us;
  const Micros last_bin = (range.end - 1) / cfg.duration_us;
  out.tokens.reserve(static_cast<std::size_t>(last_bin - first_bin + 1) * grid.size());

  const auto events = stream.events();
  std::size_t cursor = 0;
  while (cursor < events.size() && events[cursor].t < first_bin * cfg.duration_us) ++cursor;

  for (Micros bin = first_bin; bin <= last_bin; ++bin) {
    const std::size_t base = out.tokens.size();
    const Micros t_end = (bin + 1) * cfg.duration_us;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const PatchCoord c = grid.coord(i);
      out.tokens.push_back(Token{c.x, c.y, t_end, {}});
    }
    for (; cursor < events.size() && events[cursor].t < t_end; ++cursor) {
      const Event& e = events[cursor];
      out.tokens[base + grid.linear(patch_index(e.x, e.y, cfg.patch_size))].events.push_back(e);
    }
  }
  return out;
}

}  // namespace sptok
