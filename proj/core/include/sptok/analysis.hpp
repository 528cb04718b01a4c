#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sptok/baselines.hpp"
#include "sptok/event.hpp"
#include "sptok/spiking_patches.hpp"
#include "sptok/token.hpp"

namespace sptok {

// ---- spatial sparsity ------------------------------------------------------

struct WindowSparsity {
  TimeRange window;
  std::size_t empty_cells = 0;
  std::size_t total_cells = 0;
  double percent = 0.0;
};

struct SparsitySeries {
  std::vector<WindowSparsity> windows;
  double mean_percent = 0.0;
};

/// Event-level and token-level sparsity over the same window length. Each
/// series tiles its own time span; `mean_difference` is
/// mean(events) - mean(tokens), positive when tokens are sparser.
struct SparsityReport {
  SparsitySeries events;
  SparsitySeries tokens;
  double mean_difference = 0.0;
};

/// Tiles `range` into windows of `window_us` starting at range.begin; a
/// trailing partial window is included. An empty range yields no windows.
std::vector<TimeRange> tile_windows(TimeRange range, Micros window_us);

/// Percentage of patches holding no token, per window, for tokens with
/// t_spike in the window. Throws EmptyTimeRange if the range is empty.
SparsitySeries token_sparsity(const TokenStream& tokens, Micros window_us, TimeRange range);
SparsitySeries token_sparsity(const TokenStream& tokens, Micros window_us);

/// Percentage of pixels holding no event, per window.
SparsitySeries event_sparsity(const EventStream& events, Micros window_us, TimeRange range);
SparsitySeries event_sparsity(const EventStream& events, Micros window_us);

SparsityReport sparsity(const EventStream& events, const TokenStream& tokens, Micros window_us);

// ---- asynchrony ------------------------------------------------------------

/// Right-continuous step function: `points[i] = (t, n)` means the
/// cumulative count is n from time t until the next breakpoint.
struct AccumulationCurve {
  std::vector<std::pair<Micros, std::uint64_t>> points;

  std::uint64_t total() const noexcept { return points.empty() ? 0 : points.back().second; }
  std::uint64_t value_at(Micros t) const noexcept;
};

/// +1 at every event time.
AccumulationCurve accumulation_curve(const EventStream& events);
/// +|token.events| at every t_spike; empty tokens add no breakpoint.
AccumulationCurve accumulation_curve(const TokenStream& tokens);
/// Token curve from parallel (t_spike, event count) columns, for token
/// files written without member events.
AccumulationCurve accumulation_curve(std::span<const Micros> times, std::span<const std::size_t> counts);

/// Mean horizontal gap between the token curve and the event curve,
/// averaged over every count level 1..token_total: for level c, the time the
/// token curve first reaches c minus the time the event curve first reaches
/// c. Throws EmptyStream for an empty curve and MismatchedStreams if the
/// token curve holds more events than the event curve.
double delay_estimate(const AccumulationCurve& event_curve, const AccumulationCurve& token_curve);

// ---- input size ------------------------------------------------------------

struct TokenCountStats {
  std::vector<TimeRange> windows;
  std::vector<std::size_t> counts;
  double mean = 0.0;
};

/// Tokens per window over `range`. Throws EmptyTimeRange if the range is empty.
TokenCountStats token_count_stats(const TokenStream& tokens, Micros window_us, TimeRange range);
TokenCountStats token_count_stats(const TokenStream& tokens, Micros window_us);

// ---- throughput ------------------------------------------------------------

struct BenchReport {
  std::size_t events = 0;
  std::size_t tokens = 0;
  std::size_t repeats = 0;
  /// Best of the repeats.
  double wall_seconds = 0.0;
  double events_per_second = 0.0;
  /// True when every repeat produced the same token stream.
  bool deterministic = true;
};

/// Single-threaded tokenization throughput, best of `repeats`.
/// Throws EmptyStream for an empty input.
BenchReport bench_throughput(const EventStream& stream, const TokenizerConfig& config, std::size_t repeats);
BenchReport bench_voxelize(const EventStream& stream, const VoxelConfig& config, std::size_t repeats);

/// 64-bit FNV-1a over a token stream's content. Used to compare outputs
/// across repeats without keeping copies.
std::uint64_t fingerprint(const TokenStream& tokens) noexcept;

// ---- report serialization --------------------------------------------------

/// Line-oriented `key=value` summaries.
void write_key_values(std::ostream& out, const SparsityReport& report);
void write_key_values(std::ostream& out, const TokenCountStats& stats);
void write_key_values(std::ostream& out, const BenchReport& report);

/// One JSON object per line, one line per window.
void write_window_records(std::ostream& out, const SparsityReport& report);
void write_window_records(std::ostream& out, const TokenCountStats& stats);
/// One JSON object per breakpoint.
void write_curve_records(std::ostream& out, const AccumulationCurve& curve, std::string_view series);

}  // namespace sptok
