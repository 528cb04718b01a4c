#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "expect_error.hpp"
#include "random_streams.hpp"
#include "sptok/embedding.hpp"
#include "sptok/spiking_patches.hpp"

using namespace sptok;
using fixtures::code_of;

TEST(TimeBucket, Examples) {
  EXPECT_EQ(time_bucket(0.0), 0u);
  EXPECT_EQ(time_bucket(0.5), 0u);
  EXPECT_EQ(time_bucket(3.0), 2u);
  EXPECT_EQ(time_bucket(600.0), 9u);
}

TEST(TimeBucket, EdgesBelongToTheUpperBucket) {
  const double edges[] = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_EQ(time_bucket(edges[k]), k + 1) << edges[k];
    EXPECT_EQ(time_bucket(std::nextafter(edges[k], 0.0)), k) << edges[k];
  }
  EXPECT_EQ(time_bucket(0.999), 0u);
  EXPECT_EQ(time_bucket(255.999), 8u);
  EXPECT_EQ(time_bucket(1e12), 9u);
}

TEST(TimeBucket, RejectsNegativeDelta) {
  EXPECT_EQ(code_of([] { time_bucket(-0.001); }), ErrorCode::NegativeDelta);
}

TEST(TimeBucket, CustomEdgesMustIncrease) {
  EmbeddingConfig cfg;
  cfg.bucket_edges_ms[3] = cfg.bucket_edges_ms[2];
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidConfig);
}

TEST(StackedHistogram, PlacesEventsByOffsetBucketAndPolarity) {
  Token tok{1, 0, 10'000, {{7'000, 20, 3, -1}, {10'000, 16, 0, 1}}};
  const auto h = stacked_histogram(tok, 16);
  EXPECT_EQ(h.at(0, 0, 0, 1), 1u);
  EXPECT_EQ(h.at(3, 4, 2, 0), 1u);
  EXPECT_EQ(h.total(), 2u);
  // Flattened channel index is 2 * bucket + polarity channel.
  EXPECT_EQ(h.counts()[(3 * 16 + 4) * kChannels + 2 * 2 + 0], 1u);
  EXPECT_EQ(h.counts().size(), 16u * 16u * 20u);
}

TEST(StackedHistogram, RejectsForeignEvents) {
  Token tok{0, 0, 100, {{50, 16, 0, 1}}};
  EXPECT_EQ(code_of([&] { stacked_histogram(tok, 16); }), ErrorCode::EventOutsidePatch);
  Token late{0, 0, 100, {{150, 0, 0, 1}}};
  EXPECT_EQ(code_of([&] { stacked_histogram(late, 16); }), ErrorCode::NegativeDelta);
}

TEST(StackedHistogram, ConservesEventsAndIsShiftInvariant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rc = fixtures::random_case(seed, 5000);
    TokenizerConfig cfg;
    cfg.patch_size = rc.patch_size;
    cfg.threshold = 9;
    const auto ts = tokenize_stream(cfg, rc.stream);
    for (const auto& tok : ts.tokens) {
      const auto h = stacked_histogram(tok, rc.patch_size);
      ASSERT_EQ(h.total(), tok.events.size());
      Token shifted = tok;
      shifted.t_spike += 123'456'789;
      for (auto& e : shifted.events) e.t += 123'456'789;
      ASSERT_EQ(stacked_histogram(shifted, rc.patch_size), h);
    }
  }
}

TEST(LogTransform, NaturalLogOfOnePlus) {
  EXPECT_DOUBLE_EQ(log_transform(0.0), 0.0);
  EXPECT_NEAR(log_transform(1.0), 0.6931471805599453, 1e-12);
  EXPECT_NEAR(log_transform(std::exp(1.0) - 1.0), 1.0, 1e-12);

  StackedHistogram h(2);
  h.at(1, 1, 9, 1) = 3;
  const auto v = embed_log(h);
  ASSERT_EQ(v.size(), 2u * 2u * 20u);
  EXPECT_NEAR(v.back(), std::log(4.0), 1e-6);
  EXPECT_EQ(std::count(v.begin(), v.end(), 0.0f), static_cast<std::ptrdiff_t>(v.size() - 1));
}

TEST(ScaleTime, DividesAndRejectsNonPositiveScale) {
  EXPECT_DOUBLE_EQ(scale_time(100'000, 50'000), 2.0);
  EXPECT_EQ(code_of([] { scale_time(1, 0.0); }), ErrorCode::ZeroScale);
  EXPECT_EQ(code_of([] { scale_time(1, -1.0); }), ErrorCode::ZeroScale);
}

TEST(HistogramBatch, MatchesPerTokenHistograms) {
  const auto rc = fixtures::random_case(3, 3000);
  TokenizerConfig cfg;
  cfg.patch_size = rc.patch_size;
  cfg.threshold = 4;
  const auto ts = tokenize_stream(cfg, rc.stream);
  const auto batch = histogram_batch(ts.tokens, rc.patch_size);
  const std::size_t per = std::size_t{rc.patch_size} * rc.patch_size * kChannels;
  ASSERT_EQ(batch.size(), ts.size() * per);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto h = stacked_histogram(ts.tokens[i], rc.patch_size);
    ASSERT_TRUE(std::equal(h.counts().begin(), h.counts().end(), batch.begin() + static_cast<std::ptrdiff_t>(i * per)));
  }
}

TEST(HistogramExport, RoundTripsAndUsesLittleEndian) {
  StackedHistogram h(2);
  h.at(0, 0, 0, 0) = 0x01020304;
  h.at(1, 1, 9, 1) = 7;
  std::stringstream buf;
  write_histograms(buf, 2, h.counts());
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4u + 2u * 2u * 20u * 4u);
  EXPECT_EQ(bytes.substr(0, 4), std::string("\x02\x00\x14\x00", 4));
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x04\x03\x02\x01", 4));

  std::uint32_t p = 0;
  const auto back = read_histograms(buf, p);
  EXPECT_EQ(p, 2u);
  EXPECT_TRUE(std::equal(back.begin(), back.end(), h.counts().begin(), h.counts().end()));
}

TEST(HistogramExport, RejectsTruncatedPayload) {
  StackedHistogram h(1);
  std::stringstream buf;
  write_histograms(buf, 1, h.counts());
  std::string bytes = buf.str();
  bytes.pop_back();
  std::stringstream cut(bytes);
  std::uint32_t p = 0;
  EXPECT_EQ(code_of([&] { read_histograms(cut, p); }), ErrorCode::TruncatedFile);
}
