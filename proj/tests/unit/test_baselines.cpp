#include <gtest/gtest.h>

#include "random_streams.hpp"
#include "sptok/analysis.hpp"
#include "sptok/baselines.hpp"

using namespace sptok;

namespace {
constexpr Micros ms = 1000;
}

TEST(Voxelize, GroupsOnePatchOneBin) {
  std::vector<Event> ev;
  for (Micros t : {0 * ms, 10 * ms, 20 * ms, 30 * ms, 49 * ms}) ev.push_back({t, 2, 3, 1});
  const auto s = validate_stream(ev, {32, 32});
  const auto one = voxelize(s, {16, 50 * ms, 1});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.tokens[0].events.size(), 5u);
  EXPECT_EQ(one.tokens[0].t_spike, 50 * ms);
  EXPECT_TRUE(voxelize(s, {16, 50 * ms, 6}).empty());
}

TEST(Voxelize, BinBoundarySplits) {
  const auto s = validate_stream({{49 * ms, 0, 0, 1}, {51 * ms, 0, 0, 1}}, {16, 16});
  const auto v = voxelize(s, {16, 50 * ms, 1});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.tokens[0].t_spike, 50 * ms);
  EXPECT_EQ(v.tokens[1].t_spike, 100 * ms);
}

TEST(Voxelize, OrdersPatchesWithinBin) {
  const auto s = validate_stream({{1, 20, 20, 1}, {2, 20, 0, 1}, {3, 0, 20, -1}, {4, 0, 0, 1}}, {32, 32});
  const auto v = voxelize(s, {16, 10, 1});
  ASSERT_EQ(v.size(), 4u);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  for (const auto& t : v.tokens) order.emplace_back(t.patch_y, t.patch_x);
  EXPECT_EQ(order, (std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(Voxelize, RejectsInvalidConfig) {
  const auto s = validate_stream({}, {4, 4});
  EXPECT_THROW(voxelize(s, {16, 0, 1}), Error);
  EXPECT_THROW(voxelize(s, {16, 10, 0}), Error);
  EXPECT_THROW(voxelize(s, {0, 10, 1}), Error);
}

TEST(Voxelize, MinEventsOnePartitionsInput) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rc = fixtures::random_case(seed, 5000);
    const auto v = voxelize(rc.stream, {rc.patch_size, 5000, 1});
    EXPECT_EQ(v.event_count(), rc.stream.size());
    std::size_t prev = SIZE_MAX;
    double prev_sparsity = -1;
    for (std::uint32_t m : {1u, 2u, 3u, 5u, 10u, 50u}) {
      const auto vm = voxelize(rc.stream, {rc.patch_size, 5000, m});
      EXPECT_LE(vm.size(), prev);
      prev = vm.size();
      const double sp = token_sparsity(vm, 5000, rc.stream.span()).mean_percent;
      EXPECT_GE(sp, prev_sparsity);
      prev_sparsity = sp;
    }
  }
}

TEST(FramePatches, Sensor304x240FrameHas285Tokens) {
  const auto s = validate_stream({{10, 0, 0, 1}, {40'000, 303, 239, -1}}, {304, 240});
  const auto f = frame_patches(s, {16, 50 * ms});
  ASSERT_EQ(f.size(), 285u);
  for (const auto& t : f.tokens) EXPECT_EQ(t.t_spike, 50 * ms);
  EXPECT_EQ(f.tokens.front().events.size(), 1u);
  EXPECT_EQ(f.tokens.back().events.size(), 1u);
  EXPECT_EQ(f.event_count(), 2u);
}

TEST(FramePatches, SinglePatchSensor) {
  const auto s = validate_stream({{1, 0, 0, 1}, {60 * ms, 1, 1, 1}}, {2, 2});
  const auto f = frame_patches(s, {2, 50 * ms});
  EXPECT_EQ(f.size(), 2u);
}

TEST(FramePatches, EmptyWindowsStillEmitDenseTokens) {
  const auto s = validate_stream({}, {304, 240});
  EXPECT_TRUE(frame_patches(s, {16, 50 * ms}).empty());
  const auto f = frame_patches(s, {16, 50 * ms}, {0, 150 * ms});
  ASSERT_EQ(f.size(), 3u * 285u);
  EXPECT_EQ(f.event_count(), 0u);
  EXPECT_EQ(f.tokens.back().t_spike, 150 * ms);
}

TEST(FramePatches, PartitionsEventsAndIsNeverSparse) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rc = fixtures::random_case(seed, 4000);
    const auto f = frame_patches(rc.stream, {rc.patch_size, 3000});
    EXPECT_EQ(f.event_count(), rc.stream.size());
    const auto sp = token_sparsity(f, 3000);
    for (const auto& w : sp.windows) EXPECT_EQ(w.percent, 0.0);
  }
}
