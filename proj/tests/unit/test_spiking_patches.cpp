#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_streams.hpp"
#include "sptok/spiking_patches.hpp"

using namespace sptok;

namespace {

constexpr Micros ms = 1000;

TokenizerConfig plain(double sigma, std::uint32_t p = 16, Micros refractory = 0) {
  TokenizerConfig c;
  c.patch_size = p;
  c.threshold = sigma;
  c.refractory_us = refractory;
  return c;
}

std::vector<Event> same_pixel(std::initializer_list<Micros> times) {
  std::vector<Event> out;
  for (Micros t : times) out.push_back({t, 3, 4, 1});
  return out;
}

std::vector<Token> run(SpikingPatchTokenizer& tok, const std::vector<Event>& events) {
  std::vector<Token> out;
  for (const auto& e : events)
    if (auto t = tok.push_event(e)) out.push_back(std::move(*t));
  return out;
}

ErrorCode config_error(TokenizerConfig c) {
  try {
    SpikingPatchTokenizer tok(c, {304, 240});
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST(TokenizerConfig, FreshTokenizerHasIdleGrid) {
  SpikingPatchTokenizer tok(plain(250), {304, 240});
  const auto residue = tok.finalize();
  EXPECT_EQ(residue.patches.size(), 285u);
  EXPECT_EQ(residue.total_pending, 0u);
  for (const auto& p : residue.patches) {
    EXPECT_EQ(p.pending, 0u);
    EXPECT_EQ(p.potential, 0.0);
  }
}

TEST(TokenizerConfig, RejectsInvalidFields) {
  auto c = plain(250);
  c.patch_size = 0;
  EXPECT_EQ(config_error(c), ErrorCode::InvalidConfig);

  c = plain(0);
  EXPECT_EQ(config_error(c), ErrorCode::InvalidConfig);

  c = plain(250);
  c.rrp_alpha = 1.5;
  EXPECT_EQ(config_error(c), ErrorCode::InvalidConfig);

  c = plain(250);
  c.decay_per_us = -1;
  EXPECT_EQ(config_error(c), ErrorCode::InvalidConfig);

  c = plain(250);
  c.variant = Variant::discrete;
  c.decay_per_us = 0.1;
  EXPECT_EQ(config_error(c), ErrorCode::InvalidConfig);

  c = plain(250);
  c.variant = Variant::discrete;
  c.rrp_us = 5;
  EXPECT_EQ(config_error(c), ErrorCode::InvalidConfig);

  c = plain(250);
  c.variant = Variant::discrete;
  c.refractory_us = 5;  // ARP stays compatible with the discrete variant
  EXPECT_NO_THROW(c.validate());
}

TEST(TokenizerConfig, VariantNamesRoundTrip) {
  for (auto v : {Variant::plain, Variant::decay, Variant::discrete}) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("leaky"), Error);
}

// Four events spike, three fall inside the refractory period, the next four spike again.
TEST(SpikingPatches, RefractoryScenarioReplay) {
  auto cfg = plain(4, 16, 10 * ms);
  SpikingPatchTokenizer tok(cfg, {32, 32});
  const auto e = same_pixel({0, 1 * ms, 2 * ms, 3 * ms, 5 * ms, 8 * ms, 12 * ms, 14 * ms, 15 * ms, 16 * ms, 17 * ms});
  const auto tokens = run(tok, e);
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].events, std::vector<Event>(e.begin(), e.begin() + 4));
  EXPECT_EQ(tokens[0].t_spike, e[3].t);
  EXPECT_EQ(tokens[1].events, std::vector<Event>(e.begin() + 7, e.end()));
  EXPECT_EQ(tokens[1].t_spike, e[10].t);
  EXPECT_EQ(tok.finalize().total_pending, 0u);
}

TEST(SpikingPatches, PlainSpikesEverySigmaEvents) {
  SpikingPatchTokenizer tok(plain(3), {32, 32});
  const auto e = same_pixel({1, 2, 3, 4, 5, 6, 7});
  const auto tokens = run(tok, e);
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].events, std::vector<Event>(e.begin(), e.begin() + 3));
  EXPECT_EQ(tokens[1].events, std::vector<Event>(e.begin() + 3, e.begin() + 6));
  const auto residue = tok.finalize();
  EXPECT_EQ(residue.total_pending, 1u);
  EXPECT_EQ(tok.patch({0, 0}).pending.size(), 1u);
  EXPECT_EQ(tok.patch({0, 0}).potential, 1.0);
}

TEST(SpikingPatches, NonIntegerThresholdRoundsUpEventCount) {
  SpikingPatchTokenizer tok(plain(2.5), {8, 8});
  const auto tokens = run(tok, same_pixel({1, 2, 3, 4, 5, 6}));
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].events.size(), 3u);
}

TEST(SpikingPatches, UnitThresholdYieldsSingletons) {
  const auto stream = fixtures::random_stream(11, {{40, 30}, 500, 20, 0.3, 8});
  const auto out = tokenize_stream(plain(1, 8), stream);
  ASSERT_EQ(out.size(), stream.size());
  for (const auto& t : out.tokens) {
    ASSERT_EQ(t.events.size(), 1u);
    EXPECT_EQ(t.t_spike, t.events[0].t);
  }
}

TEST(SpikingPatches, EmptyStreamYieldsNoTokens) {
  const auto out = tokenize_stream(plain(5), validate_stream({}, {10, 10}));
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(out.geometry, (SensorGeometry{10, 10}));
}

TEST(SpikingPatches, RefractoryIntervalIsHalfOpen) {
  SpikingPatchTokenizer tok(plain(1, 16, 100), {16, 16});
  const auto tokens = run(tok, same_pixel({0, 99, 100, 150, 200}));
  // spikes at 0, 100 (exactly T later), 200
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[1].t_spike, 100u);
  EXPECT_EQ(tokens[2].t_spike, 200u);
}

TEST(SpikingPatches, RefractoryEventsLeaveNoTrace) {
  SpikingPatchTokenizer tok(plain(2, 16, 50), {16, 16});
  run(tok, same_pixel({0, 1, 10, 20}));
  EXPECT_EQ(tok.patch({0, 0}).pending.size(), 0u);
  EXPECT_EQ(tok.patch({0, 0}).potential, 0.0);
}

TEST(SpikingPatches, RelativeRefractoryAddsScaledPotential) {
  auto cfg = plain(2, 16, 10);
  cfg.rrp_us = 100;
  cfg.rrp_alpha = 0.5;
  SpikingPatchTokenizer tok(cfg, {16, 16});
  // spike at t=1; [1, 11) absolute; [11, 111) relative
  const auto e = same_pixel({0, 1, 5, 20, 30, 40, 50, 200, 201});
  const auto tokens = run(tok, e);
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[1].events, std::vector<Event>(e.begin() + 3, e.begin() + 7));  // 4 x 0.5 = 2
  EXPECT_EQ(tokens[2].t_spike, 201u);
}

TEST(SpikingPatches, DecayFloorDropsGroup) {
  TokenizerConfig cfg = plain(10);
  cfg.variant = Variant::decay;
  cfg.decay_per_us = 0.001;  // 5 potential units over 5 ms
  SpikingPatchTokenizer tok(cfg, {16, 16});
  run(tok, same_pixel({0}));
  EXPECT_DOUBLE_EQ(tok.patch({0, 0}).potential, 1.0);
  run(tok, same_pixel({5 * ms}));  // v = 1 + 1 - 5 = -3
  EXPECT_EQ(tok.patch({0, 0}).potential, 0.0);
  EXPECT_TRUE(tok.patch({0, 0}).pending.empty());
  run(tok, same_pixel({10 * ms}));  // first event after a reset: no decay term
  EXPECT_DOUBLE_EQ(tok.patch({0, 0}).potential, 1.0);
  EXPECT_EQ(tok.patch({0, 0}).pending.size(), 1u);
}

TEST(SpikingPatches, DecayLeaksBetweenCloseEvents) {
  TokenizerConfig cfg = plain(3);
  cfg.variant = Variant::decay;
  cfg.decay_per_us = 0.01;
  SpikingPatchTokenizer tok(cfg, {16, 16});
  run(tok, same_pixel({0, 10, 20}));  // 1, 1.9, 2.8
  EXPECT_NEAR(tok.patch({0, 0}).potential, 2.8, 1e-12);
  auto tokens = run(tok, same_pixel({25}));  // 2.8 + 1 - 0.05 = 3.75
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_EQ(tokens[0].events.size(), 4u);
}

TEST(SpikingPatches, DiscretePrunesOldEvents) {
  TokenizerConfig cfg = plain(3);
  cfg.variant = Variant::discrete;
  cfg.t_max_us = 10 * ms;
  SpikingPatchTokenizer tok(cfg, {16, 16});
  const auto e = same_pixel({0, 1 * ms, 20 * ms});
  EXPECT_TRUE(run(tok, e).empty());
  const auto& state = tok.patch({0, 0});
  EXPECT_EQ(state.pending, fixtures::prune_filter(e, 20 * ms, 10 * ms));
  EXPECT_EQ(state.pending.size(), 1u);
  EXPECT_EQ(state.potential, 1.0);
}

TEST(SpikingPatches, DiscreteKeepsEventsExactlyAtBound) {
  TokenizerConfig cfg = plain(3);
  cfg.variant = Variant::discrete;
  cfg.t_max_us = 10;
  SpikingPatchTokenizer tok(cfg, {16, 16});
  const auto tokens = run(tok, same_pixel({0, 5, 10}));
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_EQ(tokens[0].events.front().t, 0u);
}

TEST(SpikingPatches, PushRejectsBadInput) {
  SpikingPatchTokenizer tok(plain(3), {16, 16});
  tok.push_event({100, 0, 0, 1});
  try {
    tok.push_event({99, 0, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonMonotonicTime);
  }
  try {
    tok.push_event({100, 16, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfBounds);
  }
  EXPECT_NO_THROW(tok.push_event({100, 1, 1, -1}));  // equal timestamps are fine
}

TEST(SpikingPatches, TokensSortedWithPatchTieBreak) {
  // Two patches spiking at the same timestamp; arrival order is (1,0) first.
  auto stream = validate_stream({{5, 20, 0, 1}, {5, 0, 0, 1}, {5, 0, 20, 1}}, {32, 32});
  const auto out = tokenize_stream(plain(1), stream);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ((std::pair{out.tokens[0].patch_x, out.tokens[0].patch_y}), (std::pair{0u, 0u}));
  EXPECT_EQ((std::pair{out.tokens[1].patch_x, out.tokens[1].patch_y}), (std::pair{1u, 0u}));
  EXPECT_EQ((std::pair{out.tokens[2].patch_x, out.tokens[2].patch_y}), (std::pair{0u, 1u}));
}

TEST(SpikingPatches, ShardedMatchesSequentialBitForBit) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rc = fixtures::random_case(seed, 20'000);
    auto cfg = plain(7, rc.patch_size, seed * 37);
    cfg.rrp_us = seed * 11;
    cfg.rrp_alpha = 0.25;
    const auto seq = tokenize_stream(cfg, rc.stream);
    for (unsigned workers : {2u, 3u, 8u}) EXPECT_EQ(tokenize_stream_sharded(cfg, rc.stream, workers), seq);
  }
}
