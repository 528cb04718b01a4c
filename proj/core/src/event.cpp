#include "sptok/event.hpp"

#include <algorithm>
#include <string>

namespace sptok {

PatchCoord patch_index(std::uint32_t x, std::uint32_t y, std::uint32_t patch_size) {
  if (patch_size == 0) throw Error(ErrorCode::ZeroPatchSize, "patch size must be >= 1");
  return {x / patch_size, y / patch_size};
}

PatchGrid::PatchGrid(SensorGeometry geometry, std::uint32_t patch_size) : patch_size_(patch_size) {
  if (patch_size == 0) throw Error(ErrorCode::ZeroPatchSize, "patch size must be >= 1");
  if (geometry.width == 0 || geometry.height == 0)
    throw Error(ErrorCode::InvalidGeometry, "width and height must be >= 1");
  cols_ = (geometry.width + patch_size - 1) / patch_size;
  rows_ = (geometry.height + patch_size - 1) / patch_size;
}

TimeRange EventStream::span() const noexcept {
  if (events_.empty()) return {};
  return {events_.front().t, events_.back().t + 1};
}

EventStream validate_stream(std::vector<Event> events, SensorGeometry geometry) {
  if (geometry.width == 0 || geometry.height == 0)
    throw Error(ErrorCode::InvalidGeometry, "width and height must be >= 1");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (i > 0 && e.t < events[i - 1].t)
      throw Error(ErrorCode::UnsortedAt,
                  "t=" + std::to_string(e.t) + " precedes t=" + std::to_string(events[i - 1].t), i);
    if (!geometry.contains(e.x, e.y))
      throw Error(ErrorCode::OutOfBoundsAt,
                  "(" + std::to_string(e.x) + "," + std::to_string(e.y) + ") outside " +
                      std::to_string(geometry.width) + "x" + std::to_string(geometry.height),
                  i);
    if (e.p != 1 && e.p != -1)
      throw Error(ErrorCode::BadPolarityAt, "polarity " + std::to_string(e.p), i);
  }
  return EventStream(geometry, std::move(events));
}

EventStream window_slice(const EventStream& stream, Micros t0, Micros t1) {
  if (t0 > t1) throw Error(ErrorCode::InvertedWindow, "t0 > t1");
  const auto ev = stream.events();
  auto first = std::partition_point(ev.begin(), ev.end(), [t0](const Event& e) { return e.t < t0; });
  auto last = std::partition_point(first, ev.end(), [t1](const Event& e) { return e.t < t1; });
  return EventStream(stream.geometry(), std::vector<Event>(first, last));
}

}  // namespace sptok
