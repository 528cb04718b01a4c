#include "sptok/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace sptok {
namespace {

Micros column_time(const MovingBarSpec& spec, std::uint64_t steps) {
  return spec.t0_us + static_cast<Micros>(std::llround(static_cast<double>(steps) * 1e6 / spec.velocity_px_per_s));
}

}  // namespace

EventStream generate_moving_bar(const MovingBarSpec& spec, SensorGeometry geometry) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::SpecOutOfBounds, why); };
  if (!(spec.velocity_px_per_s > 0.0) || !std::isfinite(spec.velocity_px_per_s)) fail("velocity must be > 0");
  if (spec.bar_width == 0 || spec.bar_height == 0 || spec.columns == 0) fail("bar dimensions must be >= 1");
  if (std::uint64_t{spec.start_col} + spec.columns > geometry.width) fail("bar path exceeds sensor width");
  if (std::uint64_t{spec.top_row} + spec.bar_height > geometry.height) fail("bar exceeds sensor height");
  if (!(spec.noise_rate_hz >= 0.0)) fail("noise rate must be >= 0");

  std::vector<Event> events;
  events.reserve(std::size_t{2} * spec.bar_height * spec.columns);
  for (std::uint32_t k = 0; k < spec.columns; ++k) {
    const auto x = static_cast<std::uint16_t>(spec.start_col + k);
    const Micros on = column_time(spec, k);
    const Micros off = column_time(spec, std::uint64_t{k} + spec.bar_width);
    for (std::uint32_t r = 0; r < spec.bar_height; ++r) {
      const auto y = static_cast<std::uint16_t>(spec.top_row + r);
      events.push_back({on, x, y, 1});
      events.push_back({off, x, y, -1});
    }
  }

  if (spec.noise_rate_hz > 0.0) {
    const Micros t_end = column_time(spec, std::uint64_t{spec.columns - 1} + spec.bar_width) + 1;
    const double seconds = static_cast<double>(t_end - spec.t0_us) * 1e-6;
    std::mt19937_64 rng(spec.seed);
    std::poisson_distribution<std::uint64_t> count(spec.noise_rate_hz * seconds);
    std::uniform_int_distribution<Micros> when(spec.t0_us, t_end - 1);
    std::uniform_int_distribution<std::uint32_t> col(0, geometry.width - 1);
    std::uniform_int_distribution<std::uint32_t> row(0, geometry.height - 1);
    std::bernoulli_distribution positive(0.5);
    const auto n = count(rng);
    for (std::uint64_t i = 0; i < n; ++i) {
      Event e;
      e.t = when(rng);
      e.x = static_cast<std::uint16_t>(col(rng));
      e.y = static_cast<std::uint16_t>(row(rng));
      e.p = positive(rng) ? 1 : -1;
      events.push_back(e);
    }
  }

  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  return validate_stream(std::move(events), geometry);
}

EventStream generate_patch_activity(const PatchActivitySpec& spec) {
  const PatchGrid grid(spec.geometry, spec.patch_size);
  auto fail = [](const std::string& why) { throw Error(ErrorCode::SpecOutOfBounds, why); };
  if (!(spec.events_per_window > 0.0) || spec.window_us == 0) fail("event rate must be > 0");
  if (spec.active_patches == 0 || spec.active_patches > grid.size()) fail("active_patches out of range");
  if (!(spec.background_fraction >= 0.0 && spec.background_fraction < 1.0)) fail("background_fraction in [0, 1)");
  if (spec.active_patches == grid.size() && spec.background_fraction > 0.0)
    fail("background needs at least one inactive patch");

  std::mt19937_64 rng(spec.seed);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> weights(grid.size(), 0.0);
  std::lognormal_distribution<double> spread(0.0, spec.rate_spread);
  double active_sum = 0.0;
  for (std::uint32_t i = 0; i < spec.active_patches; ++i) active_sum += weights[order[i]] = spread(rng);
  for (std::uint32_t i = 0; i < spec.active_patches; ++i)
    weights[order[i]] *= (1.0 - spec.background_fraction) / active_sum;
  const std::size_t inactive = grid.size() - spec.active_patches;
  for (std::size_t i = spec.active_patches; i < grid.size(); ++i)
    weights[order[i]] = spec.background_fraction / static_cast<double>(inactive);

  std::discrete_distribution<std::size_t> pick_patch(weights.begin(), weights.end());
  const double rate_per_us = spec.events_per_window / static_cast<double>(spec.window_us);
  std::exponential_distribution<double> gap(rate_per_us);
  std::uniform_int_distribution<std::uint32_t> offset(0, spec.patch_size - 1);
  std::bernoulli_distribution positive(0.5);

  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(rate_per_us * static_cast<double>(spec.duration_us) * 1.05));
  double t = 0.0;
  while (true) {
    t += gap(rng);
    const auto t_us = static_cast<Micros>(t);
    if (t_us >= spec.duration_us) break;
    const PatchCoord c = grid.coord(pick_patch(rng));
    // Resample offsets that fall off a partial edge patch.
    std::uint32_t x, y;
    do x = c.x * spec.patch_size + offset(rng); while (x >= spec.geometry.width);
    do y = c.y * spec.patch_size + offset(rng); while (y >= spec.geometry.height);
    events.push_back({t_us, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                      static_cast<std::int8_t>(positive(rng) ? 1 : -1)});
  }
  return validate_stream(std::move(events), spec.geometry);
}

}  // namespace sptok
