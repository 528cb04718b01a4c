#include "sptok/spiking_patches.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace sptok {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::decay: return "decay";
    case Variant::discrete: return "discrete";
  }
  return "plain";
}

Variant parse_variant(std::string_view name) {
  if (name == "plain") return Variant::plain;
  if (name == "decay") return Variant::decay;
  if (name == "discrete") return Variant::discrete;
  throw Error(ErrorCode::InvalidConfig, "variant: unknown variant '" + std::string(name) + "'");
}

void TokenizerConfig::validate() const {
  auto fail = [](const char* field, const std::string& why) {
    throw Error(ErrorCode::InvalidConfig, std::string(field) + ": " + why);
  };
  if (patch_size == 0) fail("patch_size", "must be >= 1");
  if (!std::isfinite(threshold) || threshold <= 0.0) fail("threshold", "must be finite and > 0");
  if (!(rrp_alpha >= 0.0 && rrp_alpha <= 1.0)) fail("rrp_alpha", "must lie in [0, 1]");
  if (!std::isfinite(decay_per_us) || decay_per_us < 0.0) fail("decay_per_us", "must be finite and >= 0");
  if (variant == Variant::discrete) {
    if (decay_per_us != 0.0) fail("variant", "discrete variant is incompatible with decay_per_us > 0");
    if (rrp_us != 0) fail("variant", "discrete variant is incompatible with a relative refractory period");
  }
}

SpikingPatchTokenizer::SpikingPatchTokenizer(TokenizerConfig config, SensorGeometry geometry)
    : config_(config), geometry_(geometry), grid_((config.validate(), geometry), config.patch_size) {
  col_to_patch_.resize(geometry.width);
  row_to_patch_.resize(geometry.height);
  for (std::uint32_t x = 0; x < geometry.width; ++x) col_to_patch_[x] = x / config.patch_size;
  for (std::uint32_t y = 0; y < geometry.height; ++y) row_to_patch_[y] = y / config.patch_size;
  patches_.resize(grid_.size());
}

std::optional<Token> SpikingPatchTokenizer::push_event(const Event& e) {
  if (!geometry_.contains(e.x, e.y))
    throw Error(ErrorCode::OutOfBounds, "(" + std::to_string(e.x) + "," + std::to_string(e.y) + ")");
  if (last_t_ && e.t < *last_t_)
    throw Error(ErrorCode::NonMonotonicTime,
                "t=" + std::to_string(e.t) + " after t=" + std::to_string(*last_t_));
  last_t_ = e.t;
  const std::size_t linear = std::size_t{row_to_patch_[e.y]} * grid_.cols() + col_to_patch_[e.x];
  return integrate(patches_[linear], linear, e);
}

std::optional<Token> SpikingPatchTokenizer::integrate(PatchState& state, std::size_t patch_linear,
                                                      const Event& e) {
  bool in_rrp = false;
  if (state.last_spike) {
    const Micros arp_end = *state.last_spike + config_.refractory_us;
    if (e.t < arp_end) return std::nullopt;
    in_rrp = e.t < arp_end + config_.rrp_us;
  }

  if (state.pending.capacity() == 0) {
    const double expected = std::ceil(config_.threshold);
    state.pending.reserve(static_cast<std::size_t>(std::min(expected, 1024.0)));
  }

  double v = 0.0;
  if (in_rrp) {
    state.pending.push_back(e);
    v = state.potential + config_.rrp_alpha;
  } else {
    switch (config_.variant) {
      case Variant::plain:
        state.pending.push_back(e);
        v = state.potential + 1.0;
        break;
      case Variant::decay: {
        state.pending.push_back(e);
        v = state.potential + 1.0;
        if (state.last_event) v -= config_.decay_per_us * static_cast<double>(e.t - *state.last_event);
        if (v <= 0.0) {
          state.potential = 0.0;
          state.pending.clear();
          state.last_event.reset();
          return std::nullopt;
        }
        break;
      }
      case Variant::discrete: {
        state.pending.push_back(e);
        if (config_.t_max_us) {
          const Micros bound = *config_.t_max_us;
          auto keep = std::find_if(state.pending.begin(), state.pending.end(),
                                   [&](const Event& old) { return e.t - old.t <= bound; });
          state.pending.erase(state.pending.begin(), keep);
        }
        v = static_cast<double>(state.pending.size());
        break;
      }
    }
  }
  state.last_event = e.t;

  if (v >= config_.threshold) {
    const PatchCoord c = grid_.coord(patch_linear);
    Token tok{c.x, c.y, e.t, std::move(state.pending)};
    state.pending = {};
    state.potential = 0.0;
    state.last_spike = e.t;
    state.last_event.reset();
    return tok;
  }
  state.potential = v;
  return std::nullopt;
}

ResidueReport SpikingPatchTokenizer::finalize() const {
  ResidueReport report;
  report.patches.reserve(patches_.size());
  for (std::size_t i = 0; i < patches_.size(); ++i) {
    const auto& s = patches_[i];
    report.patches.push_back({grid_.coord(i), s.pending.size(), s.potential});
    report.total_pending += s.pending.size();
  }
  return report;
}

TokenStream tokenize_stream(const TokenizerConfig& config, const EventStream& stream) {
  SpikingPatchTokenizer tokenizer(config, stream.geometry());
  TokenStream out{stream.geometry(), config.patch_size, {}};
  for (const Event& e : stream) {
    if (auto tok = tokenizer.push_event(e)) out.tokens.push_back(std::move(*tok));
  }
  sort_tokens(out.tokens);
  return out;
}

TokenStream tokenize_stream_sharded(const TokenizerConfig& config, const EventStream& stream,
                                    unsigned workers) {
  if (workers <= 1) return tokenize_stream(config, stream);
  const PatchGrid grid((config.validate(), stream.geometry()), config.patch_size);
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));

  std::vector<std::vector<Token>> shards(workers);
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          SpikingPatchTokenizer tokenizer(config, stream.geometry());
          for (const Event& e : stream) {
            const auto c = patch_index(e.x, e.y, config.patch_size);
            if (grid.linear(c) % workers != w) continue;
            if (auto tok = tokenizer.push_event(e)) shards[w].push_back(std::move(*tok));
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  TokenStream out{stream.geometry(), config.patch_size, {}};
  std::size_t total = 0;
  for (const auto& s : shards) total += s.size();
  out.tokens.reserve(total);
  for (auto& s : shards) std::move(s.begin(), s.end(), std::back_inserter(out.tokens));
  std::stable_sort(out.tokens.begin(), out.tokens.end(), token_order_less);
  return out;
}

}  // namespace sptok
