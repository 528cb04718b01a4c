#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sptok/error.hpp"

namespace sptok {

/// Timestamps are integer microseconds throughout the library.
using Micros = std::uint64_t;

/// One camera event. Polarity is exactly -1 or +1.
struct Event {
  Micros t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::int8_t p = 1;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
  std::uint32_t width = 1;
  std::uint32_t height = 1;

  bool contains(std::uint32_t x, std::uint32_t y) const noexcept { return x < width && y < height; }
  std::size_t pixel_count() const noexcept { return std::size_t{width} * height; }

  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

struct PatchCoord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend bool operator==(const PatchCoord&, const PatchCoord&) = default;
};

/// (floor(x/P), floor(y/P)). Throws ZeroPatchSize for P = 0.
PatchCoord patch_index(std::uint32_t x, std::uint32_t y, std::uint32_t patch_size);

/// The ceil(width/P) x ceil(height/P) grid of non-overlapping patches.
/// Right and bottom edge patches may be partial.
class PatchGrid {
 public:
  PatchGrid(SensorGeometry geometry, std::uint32_t patch_size);

  std::uint32_t patch_size() const noexcept { return patch_size_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::uint32_t rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return std::size_t{cols_} * rows_; }

  /// Row-major linear index of a patch; ordering matches (patch_y, patch_x).
  std::size_t linear(PatchCoord c) const noexcept { return std::size_t{c.y} * cols_ + c.x; }
  PatchCoord coord(std::size_t linear_index) const noexcept {
    return {static_cast<std::uint32_t>(linear_index % cols_),
            static_cast<std::uint32_t>(linear_index / cols_)};
  }

 private:
  std::uint32_t patch_size_;
  std::uint32_t cols_;
  std::uint32_t rows_;
};

/// Half-open time interval [begin, end).
struct TimeRange {
  Micros begin = 0;
  Micros end = 0;

  bool empty() const noexcept { return end <= begin; }
  Micros duration() const noexcept { return empty() ? 0 : end - begin; }
};

/// A validated event sequence: non-decreasing timestamps, every event in
/// bounds, polarity in {-1, +1}. Only constructible through validate_stream.
class EventStream {
 public:
  explicit EventStream(SensorGeometry geometry = {}) : geometry_(geometry) {}

  const SensorGeometry& geometry() const noexcept { return geometry_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](std::size_t i) const noexcept { return events_[i]; }
  auto begin() const noexcept { return events_.begin(); }
  auto end() const noexcept { return events_.end(); }

  /// [first t, last t + 1); empty for an empty stream.
  TimeRange span() const noexcept;

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  friend EventStream validate_stream(std::vector<Event> events, SensorGeometry geometry);
  friend EventStream window_slice(const EventStream& stream, Micros t0, Micros t1);
  EventStream(SensorGeometry geometry, std::vector<Event> events)
      : geometry_(geometry), events_(std::move(events)) {}

  SensorGeometry geometry_;
  std::vector<Event> events_;
};

/// Single pass; reports the first offending index as UnsortedAt,
/// OutOfBoundsAt or BadPolarityAt. Equal timestamps keep arrival order.
EventStream validate_stream(std::vector<Event> events, SensorGeometry geometry);

/// Events with begin <= t < end, order preserved. Throws InvertedWindow if t0 > t1.
EventStream window_slice(const EventStream& stream, Micros t0, Micros t1);

}  // namespace sptok
