#include "sptok/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

namespace sptok {
namespace {

void require_window(Micros window_us) {
  if (window_us == 0) throw Error(ErrorCode::InvalidConfig, "window_us: must be >= 1");
}

double mean_of(const std::vector<WindowSparsity>& windows) {
  if (windows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& w : windows) sum += w.percent;
  return sum / static_cast<double>(windows.size());
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Counts distinct cells touched per window. `cell_of` maps an item to its
// cell index, `time_of` to its timestamp. Items must be time-sorted.
template <typename Range, typename CellOf, typename TimeOf>
SparsitySeries windowed_sparsity(const Range& items, std::size_t total_cells, Micros window_us, TimeRange range,
                                 CellOf cell_of, TimeOf time_of) {
  require_window(window_us);
  if (range.empty()) throw Error(ErrorCode::EmptyTimeRange, "no time range to tile");
  SparsitySeries series;
  std::vector<std::uint32_t> stamp(total_cells, 0);
  auto it = std::begin(items);
  const auto end = std::end(items);
  while (it != end && time_of(*it) < range.begin) ++it;

  std::uint32_t window_id = 0;
  for (const TimeRange& w : tile_windows(range, window_us)) {
    ++window_id;
    std::size_t occupied = 0;
    for (; it != end && time_of(*it) < w.end; ++it) {
      auto& s = stamp[cell_of(*it)];
      if (s != window_id) {
        s = window_id;
        ++occupied;
      }
    }
    WindowSparsity ws;
    ws.window = w;
    ws.total_cells = total_cells;
    ws.empty_cells = total_cells - occupied;
    ws.percent = 100.0 * static_cast<double>(ws.empty_cells) / static_cast<double>(total_cells);
    series.windows.push_back(ws);
  }
  series.mean_percent = mean_of(series.windows);
  return series;
}

}  // namespace

std::vector<TimeRange> tile_windows(TimeRange range, Micros window_us) {
  require_window(window_us);
  std::vector<TimeRange> out;
  for (Micros t = range.begin; t < range.end; t += window_us)
    out.push_back({t, std::min(range.end, t + window_us)});
  return out;
}

SparsitySeries token_sparsity(const TokenStream& tokens, Micros window_us, TimeRange range) {
  const PatchGrid grid(tokens.geometry, tokens.patch_size);
  return windowed_sparsity(
      tokens.tokens, grid.size(), window_us, range,
      [&](const Token& t) { return grid.linear({t.patch_x, t.patch_y}); },
      [](const Token& t) { return t.t_spike; });
}

SparsitySeries token_sparsity(const TokenStream& tokens, Micros window_us) {
  return token_sparsity(tokens, window_us, tokens.span());
}

SparsitySeries event_sparsity(const EventStream& events, Micros window_us, TimeRange range) {
  const auto width = events.geometry().width;
  return windowed_sparsity(
      events.events(), events.geometry().pixel_count(), window_us, range,
      [width](const Event& e) { return std::size_t{e.y} * width + e.x; },
      [](const Event& e) { return e.t; });
}

SparsitySeries event_sparsity(const EventStream& events, Micros window_us) {
  return event_sparsity(events, window_us, events.span());
}

SparsityReport sparsity(const EventStream& events, const TokenStream& tokens, Micros window_us) {
  SparsityReport report;
  report.events = event_sparsity(events, window_us);
  // A token stream with no tokens is fully sparse over the event span.
  report.tokens = tokens.empty() ? token_sparsity(tokens, window_us, events.span())
                                 : token_sparsity(tokens, window_us);
  report.mean_difference = report.events.mean_percent - report.tokens.mean_percent;
  return report;
}

std::uint64_t AccumulationCurve::value_at(Micros t) const noexcept {
  auto it = std::upper_bound(points.begin(), points.end(), t,
                             [](Micros value, const auto& p) { return value < p.first; });
  return it == points.begin() ? 0 : std::prev(it)->second;
}

AccumulationCurve accumulation_curve(const EventStream& events) {
  AccumulationCurve curve;
  std::uint64_t n = 0;
  for (const Event& e : events) {
    ++n;
    if (!curve.points.empty() && curve.points.back().first == e.t)
      curve.points.back().second = n;
    else
      curve.points.emplace_back(e.t, n);
  }
  return curve;
}

AccumulationCurve accumulation_curve(const TokenStream& tokens) {
  AccumulationCurve curve;
  std::uint64_t n = 0;
  for (const Token& tok : tokens.tokens) {
    if (tok.events.empty()) continue;
    n += tok.events.size();
    if (!curve.points.empty() && curve.points.back().first == tok.t_spike)
      curve.points.back().second = n;
    else
      curve.points.emplace_back(tok.t_spike, n);
  }
  return curve;
}

AccumulationCurve accumulation_curve(std::span<const Micros> times, std::span<const std::size_t> counts) {
  if (times.size() != counts.size()) throw Error(ErrorCode::MismatchedStreams, "column lengths differ");
  AccumulationCurve curve;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (counts[i] == 0) continue;
    n += counts[i];
    if (!curve.points.empty() && curve.points.back().first == times[i])
      curve.points.back().second = n;
    else
      curve.points.emplace_back(times[i], n);
  }
  return curve;
}

double delay_estimate(const AccumulationCurve& event_curve, const AccumulationCurve& token_curve) {
  if (event_curve.points.empty() || token_curve.points.empty())
    throw Error(ErrorCode::EmptyStream, "delay needs two non-empty curves");
  const std::uint64_t levels = token_curve.total();
  if (levels > event_curve.total())
    throw Error(ErrorCode::MismatchedStreams, "token curve holds more events than the event curve");

  // Walk both step functions level by level in merged runs.
  double weighted = 0.0;
  std::uint64_t level = 0;
  std::size_t i = 0, j = 0;
  while (level < levels) {
    const auto [te, ce] = event_curve.points[i];
    const auto [tt, ct] = token_curve.points[j];
    const std::uint64_t upto = std::min({ce, ct, levels});
    weighted += (static_cast<double>(tt) - static_cast<double>(te)) * static_cast<double>(upto - level);
    level = upto;
    if (ce == upto) ++i;
    if (ct == upto) ++j;
  }
  return weighted / static_cast<double>(levels);
}

TokenCountStats token_count_stats(const TokenStream& tokens, Micros window_us, TimeRange range) {
  require_window(window_us);
  if (range.empty()) throw Error(ErrorCode::EmptyTimeRange, "no time range to tile");
  TokenCountStats stats;
  stats.windows = tile_windows(range, window_us);
  stats.counts.assign(stats.windows.size(), 0);
  for (const Token& tok : tokens.tokens) {
    if (tok.t_spike < range.begin || tok.t_spike >= range.end) continue;
    ++stats.counts[(tok.t_spike - range.begin) / window_us];
  }
  double sum = 0.0;
  for (auto c : stats.counts) sum += static_cast<double>(c);
  stats.mean = sum / static_cast<double>(stats.counts.size());
  return stats;
}

TokenCountStats token_count_stats(const TokenStream& tokens, Micros window_us) {
  return token_count_stats(tokens, window_us, tokens.span());
}

std::uint64_t fingerprint(const TokenStream& tokens) noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(tokens.tokens.size());
  for (const Token& tok : tokens.tokens) {
    mix(tok.patch_x);
    mix(tok.patch_y);
    mix(tok.t_spike);
    mix(tok.events.size());
    for (const Event& e : tok.events) {
      mix(e.t);
      mix((std::uint64_t{e.x} << 24) | (std::uint64_t{e.y} << 8) | static_cast<std::uint8_t>(e.p));
    }
  }
  return h;
}

namespace {

template <typename Run>
BenchReport run_bench(const EventStream& stream, std::size_t repeats, Run run) {
  if (stream.empty()) throw Error(ErrorCode::EmptyStream, "nothing to benchmark");
  if (repeats == 0) throw Error(ErrorCode::InvalidConfig, "repeats: must be >= 1");
  BenchReport report;
  report.events = stream.size();
  report.repeats = repeats;
  report.wall_seconds = std::numeric_limits<double>::infinity();
  std::uint64_t first_print = 0;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    TokenStream tokens = run();
    const auto stop = std::chrono::steady_clock::now();
    report.wall_seconds = std::min(report.wall_seconds, std::chrono::duration<double>(stop - start).count());
    const std::uint64_t print = fingerprint(tokens);
    if (r == 0) {
      first_print = print;
      report.tokens = tokens.size();
    } else if (print != first_print) {
      report.deterministic = false;
    }
  }
  report.events_per_second = static_cast<double>(report.events) / report.wall_seconds;
  return report;
}

}  // namespace

BenchReport bench_throughput(const EventStream& stream, const TokenizerConfig& config, std::size_t repeats) {
  config.validate();
  return run_bench(stream, repeats, [&] { return tokenize_stream(config, stream); });
}

BenchReport bench_voxelize(const EventStream& stream, const VoxelConfig& config, std::size_t repeats) {
  config.validate();
  return run_bench(stream, repeats, [&] { return voxelize(stream, config); });
}

void write_key_values(std::ostream& out, const SparsityReport& report) {
  out << "event_windows=" << report.events.windows.size() << '\n'
      << "token_windows=" << report.tokens.windows.size() << '\n'
      << "sparsity_events_percent=" << fixed(report.events.mean_percent) << '\n'
      << "sparsity_tokens_percent=" << fixed(report.tokens.mean_percent) << '\n'
      << "sparsity_difference_percent=" << fixed(report.mean_difference) << '\n';
}

void write_key_values(std::ostream& out, const TokenCountStats& stats) {
  std::size_t total = 0;
  for (auto c : stats.counts) total += c;
  out << "windows=" << stats.counts.size() << '\n'
      << "tokens=" << total << '\n'
      << "mean_tokens_per_window=" << fixed(stats.mean) << '\n';
}

void write_key_values(std::ostream& out, const BenchReport& report) {
  out << "events=" << report.events << '\n'
      << "tokens=" << report.tokens << '\n'
      << "repeats=" << report.repeats << '\n'
      << "wall_seconds=" << fixed(report.wall_seconds) << '\n'
      << "events_per_second=" << fixed(report.events_per_second) << '\n'
      << "deterministic=" << (report.deterministic ? "true" : "false") << '\n';
}

void write_window_records(std::ostream& out, const SparsityReport& report) {
  auto emit = [&out](const SparsitySeries& s, const char* series) {
    for (const auto& w : s.windows) {
      nlohmann::ordered_json rec{{"series", series},
                                 {"t_begin_us", w.window.begin},
                                 {"t_end_us", w.window.end},
                                 {"empty_cells", w.empty_cells},
                                 {"total_cells", w.total_cells},
                                 {"sparsity_percent", w.percent}};
      out << rec.dump() << '\n';
    }
  };
  emit(report.events, "events");
  emit(report.tokens, "tokens");
}

void write_window_records(std::ostream& out, const TokenCountStats& stats) {
  for (std::size_t i = 0; i < stats.windows.size(); ++i) {
    nlohmann::ordered_json rec{{"t_begin_us", stats.windows[i].begin},
                               {"t_end_us", stats.windows[i].end},
                               {"tokens", stats.counts[i]}};
    out << rec.dump() << '\n';
  }
}

void write_curve_records(std::ostream& out, const AccumulationCurve& curve, std::string_view series) {
  for (const auto& [t, n] : curve.points) {
    nlohmann::ordered_json rec{{"series", series}, {"t_us", t}, {"cumulative_events", n}};
    out << rec.dump() << '\n';
  }
}

}  // namespace sptok
