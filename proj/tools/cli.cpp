#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sptok/sptok.hpp"

namespace sptok::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Micros ms_to_us(double ms, const char* flag) {
  if (!std::isfinite(ms) || ms < 0.0) throw UsageError(std::string(flag) + " must be a non-negative duration");
  return static_cast<Micros>(std::llround(ms * 1000.0));
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct InputOptions {
  std::string path;
  std::uint32_t width = 304;
  std::uint32_t height = 240;

  void add(CLI::App* cmd, const char* flag = "-i,--input") {
    cmd->add_option(flag, path, "Event file (.evs, or .csv with --width/--height)")->required();
    cmd->add_option("--width", width, "Sensor width for CSV input")->check(CLI::PositiveNumber);
    cmd->add_option("--height", height, "Sensor height for CSV input")->check(CLI::PositiveNumber);
  }
  EventStream load() const { return read_events(path, {width, height}); }
};

struct TokenizerOptions {
  std::uint32_t patch_size = 16;
  std::optional<double> threshold;
  double refractory_ms = 0.0;
  std::string variant = "plain";
  double decay_lambda = 0.0;
  double rrp_ms = 0.0;
  double rrp_alpha = 1.0;
  std::optional<double> t_max_ms;

  void add(CLI::App* cmd) {
    cmd->add_option("--patch-size", patch_size, "Patch side P in pixels")->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", threshold, "Spike threshold sigma (default P^2)");
    cmd->add_option("--refractory-ms", refractory_ms, "Absolute refractory period T in ms");
    cmd->add_option("--variant", variant, "plain | decay | discrete")
        ->check(CLI::IsMember({"plain", "decay", "discrete"}));
    cmd->add_option("--decay-lambda", decay_lambda, "Decay rate lambda, potential per microsecond");
    cmd->add_option("--rrp-ms", rrp_ms, "Relative refractory period T_rel in ms");
    cmd->add_option("--rrp-alpha", rrp_alpha, "Potential gain alpha inside the relative refractory period");
    cmd->add_option("--t-max-ms", t_max_ms, "Discrete variant: maximum token duration T_max in ms");
  }

  TokenizerConfig config() const {
    TokenizerConfig c;
    c.patch_size = patch_size;
    c.threshold = threshold.value_or(static_cast<double>(patch_size) * patch_size);
    c.refractory_us = ms_to_us(refractory_ms, "--refractory-ms");
    c.variant = parse_variant(variant);
    c.decay_per_us = decay_lambda;
    c.rrp_us = ms_to_us(rrp_ms, "--rrp-ms");
    c.rrp_alpha = rrp_alpha;
    if (t_max_ms) c.t_max_us = ms_to_us(*t_max_ms, "--t-max-ms");
    c.validate();
    return c;
  }
};

TokenFileMeta describe(const TokenizerConfig& c) {
  TokenFileMeta meta{"spiking_patches", {}};
  meta.params = {{"variant", std::string(to_string(c.variant))},
                 {"threshold", num(c.threshold)},
                 {"refractory_us", std::to_string(c.refractory_us)},
                 {"rrp_us", std::to_string(c.rrp_us)},
                 {"rrp_alpha", num(c.rrp_alpha)},
                 {"decay_per_us", num(c.decay_per_us)},
                 {"t_max_us", c.t_max_us ? std::to_string(*c.t_max_us) : std::string("inf")}};
  return meta;
}

std::ofstream open_text(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  return f;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spiking-patch tokenization of event-camera streams", "sptok"};
  app.require_subcommand(1);
  std::function<void()> action;

  // generate ------------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "Write a synthetic event stream");
  generate->require_subcommand(1);
  std::string gen_out;
  std::uint64_t gen_seed = 0;

  MovingBarSpec bar;
  std::uint32_t bar_w = 304, bar_h = 240;
  auto* gen_bar = generate->add_subcommand("bar", "Moving bar stimulus");
  gen_bar->add_option("-o,--output", gen_out, "Output .evs or .csv")->required();
  gen_bar->add_option("--width", bar_w, "Sensor width")->check(CLI::PositiveNumber);
  gen_bar->add_option("--height", bar_h, "Sensor height")->check(CLI::PositiveNumber);
  gen_bar->add_option("--bar-width", bar.bar_width, "Bar width in pixels");
  gen_bar->add_option("--bar-height", bar.bar_height, "Bar height in pixels");
  gen_bar->add_option("--velocity", bar.velocity_px_per_s, "Pixels per second");
  gen_bar->add_option("--start-col", bar.start_col, "First column the leading edge enters");
  gen_bar->add_option("--top-row", bar.top_row, "Top row of the bar");
  gen_bar->add_option("--columns", bar.columns, "Columns traversed");
  gen_bar->add_option("--t0-us", bar.t0_us, "Start time in microseconds");
  gen_bar->add_option("--noise-rate", bar.noise_rate_hz, "Uniform noise events per second");
  gen_bar->add_option("--seed", gen_seed, "Noise seed");
  gen_bar->callback([&] {
    action = [&] {
      bar.seed = gen_seed;
      const auto stream = generate_moving_bar(bar, {bar_w, bar_h});
      write_events(gen_out, stream);
      out << "events=" << stream.size() << '\n';
    };
  });

  PatchActivitySpec activity;
  double act_window_ms = 50.0, act_duration_ms = 2000.0;
  auto* gen_act = generate->add_subcommand("activity", "Poisson patch activity (driving-scene statistics)");
  gen_act->add_option("-o,--output", gen_out, "Output .evs or .csv")->required();
  gen_act->add_option("--width", activity.geometry.width, "Sensor width")->check(CLI::PositiveNumber);
  gen_act->add_option("--height", activity.geometry.height, "Sensor height")->check(CLI::PositiveNumber);
  gen_act->add_option("--patch-size", activity.patch_size, "Patch side")->check(CLI::PositiveNumber);
  gen_act->add_option("--events-per-window", activity.events_per_window, "Mean events per window");
  gen_act->add_option("--window-ms", act_window_ms, "Window for --events-per-window");
  gen_act->add_option("--active-patches", activity.active_patches, "Patches carrying most of the activity");
  gen_act->add_option("--rate-spread", activity.rate_spread, "Log-normal sigma of active patch rates");
  gen_act->add_option("--background", activity.background_fraction, "Fraction of events on inactive patches");
  gen_act->add_option("--duration-ms", act_duration_ms, "Stream duration");
  gen_act->add_option("--seed", gen_seed, "Seed");
  gen_act->callback([&] {
    action = [&] {
      activity.seed = gen_seed;
      activity.window_us = ms_to_us(act_window_ms, "--window-ms");
      activity.duration_us = ms_to_us(act_duration_ms, "--duration-ms");
      const auto stream = generate_patch_activity(activity);
      write_events(gen_out, stream);
      out << "events=" << stream.size() << '\n';
    };
  });

  // tokenize ------------------------------------------------------------------
  auto* tokenize = app.add_subcommand("tokenize", "Spiking-patch tokenization");
  InputOptions tok_in;
  TokenizerOptions tok_opts;
  std::string tok_out;
  bool with_events = false;
  tok_in.add(tokenize);
  tok_opts.add(tokenize);
  tokenize->add_option("-o,--output", tok_out, "Token file (JSON Lines)")->required();
  tokenize->add_flag("--with-events", with_events, "Include member events in each token record");
  tokenize->callback([&] {
    action = [&] {
      const auto config = tok_opts.config();
      const auto stream = tok_in.load();
      SpikingPatchTokenizer tokenizer(config, stream.geometry());
      TokenStream tokens{stream.geometry(), config.patch_size, {}};
      for (const Event& e : stream)
        if (auto t = tokenizer.push_event(e)) tokens.tokens.push_back(std::move(*t));
      sort_tokens(tokens.tokens);
      write_tokens(tok_out, tokens, describe(config), with_events);
      out << "events=" << stream.size() << '\n'
          << "tokens=" << tokens.size() << '\n'
          << "events_in_tokens=" << tokens.event_count() << '\n'
          << "residual_events=" << tokenizer.finalize().total_pending << '\n';
    };
  });

  // voxelize / frames -----------------------------------------------------------
  auto* voxel_cmd = app.add_subcommand("voxelize", "Voxel baseline tokenization");
  InputOptions vox_in;
  std::uint32_t vox_patch = 16, vox_min = 1;
  double vox_ms = 50.0;
  std::string vox_out;
  vox_in.add(voxel_cmd);
  voxel_cmd->add_option("--patch-size", vox_patch, "Patch side")->check(CLI::PositiveNumber);
  voxel_cmd->add_option("--duration-ms", vox_ms, "Voxel duration");
  voxel_cmd->add_option("--min-events", vox_min, "Drop voxels with fewer events")->check(CLI::PositiveNumber);
  voxel_cmd->add_option("-o,--output", vox_out, "Token file")->required();
  voxel_cmd->add_flag("--with-events", with_events, "Include member events");
  voxel_cmd->callback([&] {
    action = [&] {
      VoxelConfig cfg{vox_patch, ms_to_us(vox_ms, "--duration-ms"), vox_min};
      const auto stream = vox_in.load();
      const auto tokens = voxelize(stream, cfg);
      write_tokens(vox_out, tokens,
                   {"voxel", {{"duration_us", std::to_string(cfg.duration_us)},
                              {"min_events", std::to_string(cfg.min_events)}}},
                   with_events);
      out << "events=" << stream.size() << '\n' << "tokens=" << tokens.size() << '\n';
    };
  });

  auto* frames_cmd = app.add_subcommand("frames", "Dense frame-patch baseline");
  InputOptions frame_in;
  std::uint32_t frame_patch = 16;
  double frame_ms = 50.0;
  std::string frame_out;
  frame_in.add(frames_cmd);
  frames_cmd->add_option("--patch-size", frame_patch, "Patch side")->check(CLI::PositiveNumber);
  frames_cmd->add_option("--duration-ms", frame_ms, "Frame window");
  frames_cmd->add_option("-o,--output", frame_out, "Token file")->required();
  frames_cmd->add_flag("--with-events", with_events, "Include member events");
  frames_cmd->callback([&] {
    action = [&] {
      FrameConfig cfg{frame_patch, ms_to_us(frame_ms, "--duration-ms")};
      const auto stream = frame_in.load();
      const auto tokens = frame_patches(stream, cfg);
      write_tokens(frame_out, tokens, {"frame", {{"duration_us", std::to_string(cfg.duration_us)}}}, with_events);
      out << "events=" << stream.size() << '\n' << "tokens=" << tokens.size() << '\n';
    };
  });

  // embed -------------------------------------------------------------------------
  auto* embed_cmd = app.add_subcommand("embed", "Stacked-histogram embedding of a token file");
  std::string embed_in, embed_out;
  bool embed_log_flag = false;
  embed_cmd->add_option("-i,--input", embed_in, "Token file written with --with-events")->required();
  embed_cmd->add_option("-o,--output", embed_out, "Histogram binary")->required();
  embed_cmd->add_flag("--log", embed_log_flag, "Write log(x+1) as little-endian float32 instead of u32 counts");
  embed_cmd->callback([&] {
    action = [&] {
      const auto file = read_tokens(embed_in);
      if (!file.has_events && !file.stream.empty())
        throw Error(ErrorCode::ParseErrorAt, "token file lacks member events; re-run with --with-events", 2);
      const auto counts = histogram_batch(file.stream.tokens, file.stream.patch_size);
      std::ofstream f(embed_out, std::ios::binary | std::ios::trunc);
      if (!f) throw Error(ErrorCode::Io, "cannot write " + embed_out);
      if (embed_log_flag) {
        std::vector<std::uint32_t> bits;
        bits.reserve(counts.size());
        for (auto c : counts) {
          const auto v = static_cast<float>(log_transform(c));
          std::uint32_t b;
          std::memcpy(&b, &v, sizeof b);
          bits.push_back(b);
        }
        write_histograms(f, file.stream.patch_size, bits);
      } else {
        write_histograms(f, file.stream.patch_size, counts);
      }
      out << "tokens=" << file.stream.size() << '\n'
          << "patch_size=" << file.stream.patch_size << '\n'
          << "channels=" << kChannels << '\n';
    };
  });

  // analyze -----------------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "Sparsity, accumulation, input size and delay analyses");
  analyze->require_subcommand(1);
  InputOptions an_events;
  std::string an_tokens, an_records;
  double an_window_ms = 50.0;
  auto add_common = [&](CLI::App* cmd, bool need_events, bool need_tokens) {
    auto* e = cmd->add_option("-e,--events", an_events.path, "Event file");
    cmd->add_option("--width", an_events.width, "Sensor width for CSV input");
    cmd->add_option("--height", an_events.height, "Sensor height for CSV input");
    auto* t = cmd->add_option("-t,--tokens", an_tokens, "Token file");
    if (need_events) e->required();
    if (need_tokens) t->required();
    cmd->add_option("-o,--records", an_records, "Write per-window / per-breakpoint JSON Lines records here");
  };

  auto* an_sparsity = analyze->add_subcommand("sparsity", "Spatial sparsity of events and tokens");
  add_common(an_sparsity, true, true);
  an_sparsity->add_option("--window-ms", an_window_ms, "Window length");
  an_sparsity->callback([&] {
    action = [&] {
      const auto events = an_events.load();
      const auto tokens = read_tokens(an_tokens);
      const auto report = sparsity(events, tokens.stream, ms_to_us(an_window_ms, "--window-ms"));
      write_key_values(out, report);
      if (!an_records.empty()) {
        auto f = open_text(an_records);
        write_window_records(f, report);
      }
    };
  });

  auto* an_accum = analyze->add_subcommand("accumulate", "Cumulative events captured over time");
  add_common(an_accum, false, false);
  an_accum->callback([&] {
    action = [&] {
      if (an_events.path.empty() && an_tokens.empty()) throw UsageError("need --events and/or --tokens");
      std::optional<std::ofstream> f;
      if (!an_records.empty()) f.emplace(open_text(an_records));
      if (!an_events.path.empty()) {
        const auto curve = accumulation_curve(an_events.load());
        out << "event_total=" << curve.total() << '\n' << "event_breakpoints=" << curve.points.size() << '\n';
        if (f) write_curve_records(*f, curve, "events");
      }
      if (!an_tokens.empty()) {
        const auto file = read_tokens(an_tokens);
        std::vector<Micros> times;
        for (const auto& tok : file.stream.tokens) times.push_back(tok.t_spike);
        const auto curve = accumulation_curve(times, file.event_counts);
        out << "token_total=" << curve.total() << '\n' << "token_breakpoints=" << curve.points.size() << '\n';
        if (f) write_curve_records(*f, curve, "tokens");
      }
    };
  });

  auto* an_counts = analyze->add_subcommand("counts", "Mean tokens per window");
  add_common(an_counts, false, true);
  an_counts->add_option("--window-ms", an_window_ms, "Window length");
  an_counts->callback([&] {
    action = [&] {
      const auto file = read_tokens(an_tokens);
      const Micros window = ms_to_us(an_window_ms, "--window-ms");
      // With --events the windows tile the event stream's span.
      const auto stats = an_events.path.empty() ? token_count_stats(file.stream, window)
                                                : token_count_stats(file.stream, window, an_events.load().span());
      write_key_values(out, stats);
      if (!an_records.empty()) {
        auto f = open_text(an_records);
        write_window_records(f, stats);
      }
    };
  });

  auto* an_delay = analyze->add_subcommand("delay", "Mean lag of the token curve behind the event curve");
  add_common(an_delay, true, true);
  an_delay->callback([&] {
    action = [&] {
      const auto event_curve = accumulation_curve(an_events.load());
      const auto file = read_tokens(an_tokens);
      std::vector<Micros> times;
      for (const auto& tok : file.stream.tokens) times.push_back(tok.t_spike);
      const auto token_curve = accumulation_curve(times, file.event_counts);
      const double delay = delay_estimate(event_curve, token_curve);
      out << "delay_us=" << fixed(delay) << '\n' << "delay_ms=" << fixed(delay / 1000.0) << '\n';
    };
  });

  // bench ---------------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Single-worker tokenization throughput");
  std::string bench_in;
  std::uint32_t bench_w = 304, bench_h = 240;
  std::size_t repeats = 5;
  bool bench_voxel = false;
  double bench_voxel_ms = 50.0;
  TokenizerOptions bench_opts;
  bench->add_option("-i,--input", bench_in, "Event file (default: generated driving-scene activity)");
  bench->add_option("--width", bench_w, "Sensor width for CSV input");
  bench->add_option("--height", bench_h, "Sensor height for CSV input");
  bench->add_option("--repeats", repeats, "Repetitions; best wall time is reported")->check(CLI::PositiveNumber);
  bench->add_flag("--voxel", bench_voxel, "Also benchmark the voxel baseline");
  bench->add_option("--voxel-duration-ms", bench_voxel_ms, "Voxel duration for --voxel");
  bench_opts.add(bench);
  bench->callback([&] {
    action = [&] {
      const auto config = bench_opts.config();
      const EventStream stream = bench_in.empty() ? generate_patch_activity(PatchActivitySpec{})
                                                  : read_events(bench_in, {bench_w, bench_h});
      const auto report = bench_throughput(stream, config, repeats);
      write_key_values(out, report);
      if (bench_voxel) {
        const auto vr = bench_voxelize(stream, {config.patch_size, ms_to_us(bench_voxel_ms, "--voxel-duration-ms"), 1},
                                       repeats);
        out << "voxel_tokens=" << vr.tokens << '\n'
            << "voxel_wall_seconds=" << fixed(vr.wall_seconds) << '\n'
            << "voxel_events_per_second=" << fixed(vr.events_per_second) << '\n';
      }
    };
  });

  std::vector<const char*> argv{"sptok"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace sptok::cli
