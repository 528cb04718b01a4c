#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sptok/token.hpp"

namespace sptok {

inline constexpr std::size_t kTimeBuckets = 10;
inline constexpr std::size_t kPolarities = 2;
inline constexpr std::size_t kChannels = kTimeBuckets * kPolarities;

/// Upper edges (ms) of the first nine time buckets; the tenth is unbounded.
inline constexpr std::array<double, kTimeBuckets - 1> kDefaultBucketEdgesMs{1, 2, 4, 8, 16, 32, 64, 128, 256};

struct EmbeddingConfig {
  /// Divisor applied to the time axis before positional encoding.
  double time_scale_s = 50'000.0;
  std::array<double, kTimeBuckets - 1> bucket_edges_ms = kDefaultBucketEdgesMs;

  void validate() const;
};

/// Bucket index 0..9 for an elapsed time before the spike.
/// Buckets are [0,1), [1,2), [2,4), ..., [128,256), [256,inf) ms.
std::size_t time_bucket(double delta_ms, const EmbeddingConfig& cfg = {});

/// P x P x 10 x 2 event counts for one token. Memory layout is
/// (row, col, channel) with channel = 2 * bucket + polarity channel, so the
/// 4-D view and the flattened P x P x 20 view share storage.
class StackedHistogram {
 public:
  explicit StackedHistogram(std::uint32_t patch_size);

  std::uint32_t patch_size() const noexcept { return patch_size_; }
  std::uint32_t& at(std::uint32_t row, std::uint32_t col, std::size_t bucket, std::size_t pol);
  std::uint32_t at(std::uint32_t row, std::uint32_t col, std::size_t bucket, std::size_t pol) const;

  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::span<std::uint32_t> counts() noexcept { return counts_; }
  std::uint64_t total() const noexcept;

  friend bool operator==(const StackedHistogram&, const StackedHistogram&) = default;

 private:
  std::size_t offset(std::uint32_t row, std::uint32_t col, std::size_t bucket, std::size_t pol) const;

  std::uint32_t patch_size_;
  std::vector<std::uint32_t> counts_;
};

/// -1 -> 0, +1 -> 1.
constexpr std::size_t polarity_channel(std::int8_t p) noexcept { return p > 0 ? 1 : 0; }

/// Counts every member event at (y - y0, x - x0, bucket(t_spike - t), pol).
/// Throws EventOutsidePatch if a member lies outside the token's patch.
StackedHistogram stacked_histogram(const Token& token, std::uint32_t patch_size,
                                   const EmbeddingConfig& cfg = {});

/// Natural log(x + 1).
double log_transform(double x) noexcept;

/// Elementwise log(x + 1) of the flattened histogram, P x P x 20.
std::vector<float> embed_log(const StackedHistogram& hist);

/// t / s. Throws ZeroScale unless s > 0.
double scale_time(Micros t_us, double s);

/// Dense (n_tokens, P, P, 20) counts for a whole token stream.
std::vector<std::uint32_t> histogram_batch(std::span<const Token> tokens, std::uint32_t patch_size,
                                           const EmbeddingConfig& cfg = {});

/// Binary export: P and channel count as little-endian u16, then the counts
/// of each histogram as little-endian u32 in (row, col, channel) order.
/// Several histograms share one header and follow back to back.
void write_histograms(std::ostream& out, std::uint32_t patch_size, std::span<const std::uint32_t> counts);

/// Reads a histogram export; returns the flat counts and sets `patch_size`.
std::vector<std::uint32_t> read_histograms(std::istream& in, std::uint32_t& patch_size);

}  // namespace sptok
