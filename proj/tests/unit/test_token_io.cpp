#include <gtest/gtest.h>

#include <sstream>

#include "expect_error.hpp"
#include "random_streams.hpp"
#include "sptok/spiking_patches.hpp"
#include "sptok/token_io.hpp"

using namespace sptok;
using fixtures::code_of;
using fixtures::index_of;

namespace {

TokenFile parse(const std::string& text) {
  std::istringstream in(text);
  return read_tokens(in);
}

const std::string kHeader =
    R"({"format":"sptok.tokens","version":1,"width":32,"height":16,"patch_size":16,"method":"x","params":{}})"
    "\n";

}  // namespace

TEST(TokenFile, WritesDocumentedLayout) {
  TokenStream ts{{32, 16}, 16, {Token{1, 0, 7, {{3, 17, 2, -1}, {7, 16, 0, 1}}}}};
  std::ostringstream out;
  write_tokens(out, ts, {"spiking_patches", {{"threshold", "2"}}}, true);
  EXPECT_EQ(out.str(),
            R"({"format":"sptok.tokens","version":1,"width":32,"height":16,"patch_size":16,)"
            R"("method":"spiking_patches","params":{"threshold":"2"}})"
            "\n"
            R"({"patch_x":1,"patch_y":0,"t_spike_us":7,"n_events":2,"events":[[3,17,2,-1],[7,16,0,1]]})"
            "\n");
}

TEST(TokenFile, RoundTripsWithAndWithoutEvents) {
  const auto rc = fixtures::random_case(4, 5000);
  TokenizerConfig cfg;
  cfg.patch_size = rc.patch_size;
  cfg.threshold = 6;
  const auto ts = tokenize_stream(cfg, rc.stream);
  const TokenFileMeta meta{"spiking_patches", {{"threshold", "6"}, {"variant", "plain"}}};

  std::stringstream full;
  write_tokens(full, ts, meta, true);
  const auto back = read_tokens(full);
  EXPECT_TRUE(back.has_events);
  EXPECT_EQ(back.stream, ts);
  EXPECT_EQ(back.meta.method, "spiking_patches");
  EXPECT_EQ(back.meta.params, meta.params);

  std::stringstream bare;
  write_tokens(bare, ts, meta, false);
  const auto thin = read_tokens(bare);
  EXPECT_FALSE(thin.has_events);
  ASSERT_EQ(thin.stream.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_EQ(thin.event_counts[i], ts.tokens[i].events.size());
    EXPECT_EQ(thin.stream.tokens[i].t_spike, ts.tokens[i].t_spike);
    EXPECT_TRUE(thin.stream.tokens[i].events.empty());
  }
}

TEST(TokenFile, RejectsMalformedInput) {
  EXPECT_EQ(index_of([] { parse(""); }), 1u);
  EXPECT_EQ(index_of([] { parse(R"({"format":"other","version":1})" "\n"); }), 1u);
  EXPECT_EQ(index_of([] { parse(kHeader + "{not json\n"); }), 2u);
  EXPECT_EQ(index_of([] {
              parse(kHeader + R"({"patch_x":0,"patch_y":0,"t_spike_us":5,"n_events":2,"events":[[5,0,0,1]]})" "\n");
            }),
            2u);
  EXPECT_EQ(index_of([] {
              parse(kHeader + R"({"patch_x":0,"patch_y":0,"t_spike_us":5,"n_events":0})" "\n" +
                    R"({"patch_x":0,"patch_y":0,"t_spike_us":4,"n_events":0})" "\n");
            }),
            3u);
  EXPECT_EQ(code_of([] {
              parse(kHeader + R"({"patch_x":0,"patch_y":0,"t_spike_us":5,"n_events":1,"events":[[5,0,0,0]]})" "\n");
            }),
            ErrorCode::ParseErrorAt);
}
