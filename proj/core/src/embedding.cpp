#include "sptok/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "le.hpp"

namespace sptok {

void EmbeddingConfig::validate() const {
  if (!(time_scale_s > 0.0)) throw Error(ErrorCode::ZeroScale, "time_scale_s must be > 0");
  double prev = 0.0;
  for (double edge : bucket_edges_ms) {
    if (!(edge > prev))
      throw Error(ErrorCode::InvalidConfig, "bucket_edges_ms: must be positive and strictly increasing");
    prev = edge;
  }
}

std::size_t time_bucket(double delta_ms, const EmbeddingConfig& cfg) {
  if (!(delta_ms >= 0.0)) throw Error(ErrorCode::NegativeDelta, "delta_ms=" + std::to_string(delta_ms));
  const auto& edges = cfg.bucket_edges_ms;
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), delta_ms) - edges.begin());
}

StackedHistogram::StackedHistogram(std::uint32_t patch_size)
    : patch_size_(patch_size), counts_(std::size_t{patch_size} * patch_size * kChannels, 0) {
  if (patch_size == 0) throw Error(ErrorCode::ZeroPatchSize, "patch size must be >= 1");
}

std::size_t StackedHistogram::offset(std::uint32_t row, std::uint32_t col, std::size_t bucket,
                                     std::size_t pol) const {
  if (row >= patch_size_ || col >= patch_size_ || bucket >= kTimeBuckets || pol >= kPolarities)
    throw Error(ErrorCode::EventOutsidePatch, "histogram index out of range");
  return (std::size_t{row} * patch_size_ + col) * kChannels + bucket * kPolarities + pol;
}

std::uint32_t& StackedHistogram::at(std::uint32_t row, std::uint32_t col, std::size_t bucket, std::size_t pol) {
  return counts_[offset(row, col, bucket, pol)];
}

std::uint32_t StackedHistogram::at(std::uint32_t row, std::uint32_t col, std::size_t bucket,
                                   std::size_t pol) const {
  return counts_[offset(row, col, bucket, pol)];
}

std::uint64_t StackedHistogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

namespace {

void accumulate_token(std::span<std::uint32_t> out, const Token& token, std::uint32_t patch_size,
                      const EmbeddingConfig& cfg) {
  const std::uint64_t x0 = std::uint64_t{token.patch_x} * patch_size;
  const std::uint64_t y0 = std::uint64_t{token.patch_y} * patch_size;
  for (const Event& e : token.events) {
    if (e.x < x0 || e.x >= x0 + patch_size || e.y < y0 || e.y >= y0 + patch_size)
      throw Error(ErrorCode::EventOutsidePatch,
                  "(" + std::to_string(e.x) + "," + std::to_string(e.y) + ") not in patch (" +
                      std::to_string(token.patch_x) + "," + std::to_string(token.patch_y) + ")");
    if (e.t > token.t_spike) throw Error(ErrorCode::NegativeDelta, "member event after t_spike");
    const double delta_ms = static_cast<double>(token.t_spike - e.t) / 1000.0;
    const std::size_t row = e.y - y0;
    const std::size_t col = e.x - x0;
    const std::size_t channel = time_bucket(delta_ms, cfg) * kPolarities + polarity_channel(e.p);
    ++out[(row * patch_size + col) * kChannels + channel];
  }
}

}  // namespace

StackedHistogram stacked_histogram(const Token& token, std::uint32_t patch_size, const EmbeddingConfig& cfg) {
  StackedHistogram hist(patch_size);
  accumulate_token(hist.counts(), token, patch_size, cfg);
  return hist;
}

double log_transform(double x) noexcept { return std::log1p(x); }

std::vector<float> embed_log(const StackedHistogram& hist) {
  std::vector<float> out;
  out.reserve(hist.counts().size());
  for (auto c : hist.counts()) out.push_back(static_cast<float>(log_transform(static_cast<double>(c))));
  return out;
}

double scale_time(Micros t_us, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::ZeroScale, "time scale must be > 0");
  return static_cast<double>(t_us) / s;
}

std::vector<std::uint32_t> histogram_batch(std::span<const Token> tokens, std::uint32_t patch_size,
                                           const EmbeddingConfig& cfg) {
  if (patch_size == 0) throw Error(ErrorCode::ZeroPatchSize, "patch size must be >= 1");
  const std::size_t stride = std::size_t{patch_size} * patch_size * kChannels;
  std::vector<std::uint32_t> out(tokens.size() * stride, 0);
  for (std::size_t i = 0; i < tokens.size(); ++i)
    accumulate_token(std::span(out).subspan(i * stride, stride), tokens[i], patch_size, cfg);
  return out;
}

void write_histograms(std::ostream& out, std::uint32_t patch_size, std::span<const std::uint32_t> counts) {
  if (patch_size == 0 || patch_size > 0xFFFF) throw Error(ErrorCode::InvalidConfig, "patch_size: must fit u16");
  le::put<std::uint16_t>(out, static_cast<std::uint16_t>(patch_size));
  le::put<std::uint16_t>(out, static_cast<std::uint16_t>(kChannels));
  for (auto c : counts) le::put<std::uint32_t>(out, c);
  if (!out) throw Error(ErrorCode::Io, "failed writing histograms");
}

std::vector<std::uint32_t> read_histograms(std::istream& in, std::uint32_t& patch_size) {
  std::uint16_t p = 0, channels = 0;
  if (!le::read(in, p) || !le::read(in, channels)) throw Error(ErrorCode::TruncatedFile, "histogram header", 0);
  if (channels != kChannels || p == 0)
    throw Error(ErrorCode::BadMagic, "unexpected histogram header P=" + std::to_string(p) +
                                         " channels=" + std::to_string(channels));
  patch_size = p;
  std::vector<std::uint32_t> counts;
  std::uint32_t c = 0;
  while (le::read(in, c)) counts.push_back(c);
  if (in.gcount() != 0) throw Error(ErrorCode::TruncatedFile, "partial count", 4 + counts.size() * 4);
  const std::size_t stride = std::size_t{p} * p * kChannels;
  if (counts.size() % stride != 0)
    throw Error(ErrorCode::TruncatedFile, "partial histogram", 4 + counts.size() * 4);
  return counts;
}

}  // namespace sptok
