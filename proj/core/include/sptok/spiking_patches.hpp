#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sptok/event.hpp"
#include "sptok/token.hpp"

namespace sptok {

enum class Variant : std::uint8_t {
  /// Each accepted event raises the potential by one.
  plain,
  /// Like plain, minus a leak proportional to the gap since the previous
  /// accepted event in the patch. A potential at or below zero discards the
  /// pending group.
  decay,
  /// The potential is the size of the pending group after dropping events
  /// older than `t_max_us` relative to the newest one.
  discrete,
};

std::string_view to_string(Variant v) noexcept;
/// Parses "plain", "decay" or "discrete"; throws InvalidConfig otherwise.
Variant parse_variant(std::string_view name);

struct TokenizerConfig {
  std::uint32_t patch_size = 16;
  /// Spike threshold. Non-integer values are allowed.
  double threshold = 256.0;
  /// Absolute refractory period: events in [t_spike, t_spike + T) are discarded.
  Micros refractory_us = 0;
  /// Relative refractory period following the absolute one.
  Micros rrp_us = 0;
  /// Potential gain for events inside the relative refractory window.
  double rrp_alpha = 1.0;
  /// Potential lost per microsecond between accepted events (decay variant).
  double decay_per_us = 0.0;
  /// Pending-group age bound for the discrete variant; nullopt means unbounded.
  std::optional<Micros> t_max_us;
  Variant variant = Variant::plain;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;
};

/// Per-patch accumulator. `last_event` is the previous accepted event time
/// since the last reset and drives the decay term.
struct PatchState {
  double potential = 0.0;
  std::vector<Event> pending;
  std::optional<Micros> last_spike;
  std::optional<Micros> last_event;
};

struct PatchResidue {
  PatchCoord patch;
  std::size_t pending = 0;
  double potential = 0.0;
};

/// Events still waiting in pending groups. Residual events never produce
/// tokens; this only measures what would be lost at end of stream.
struct ResidueReport {
  std::vector<PatchResidue> patches;  // one entry per grid cell, row-major
  std::size_t total_pending = 0;
};

/// Streaming spiking-patch tokenizer. Each patch of the sensor grid behaves
/// as an integrate-and-fire neuron: accepted events raise its potential, and
/// once the potential reaches the threshold the events gathered since the
/// previous spike are emitted as one token and the potential resets to zero.
///
/// Requires exclusive access while consuming a stream.
class SpikingPatchTokenizer {
 public:
  SpikingPatchTokenizer(TokenizerConfig config, SensorGeometry geometry);

  /// Feeds one event. Returns the token if this event made its patch spike.
  /// Throws OutOfBounds for pixels outside the sensor and NonMonotonicTime
  /// if `e.t` precedes an earlier pushed event.
  std::optional<Token> push_event(const Event& e);

  ResidueReport finalize() const;

  const TokenizerConfig& config() const noexcept { return config_; }
  const SensorGeometry& geometry() const noexcept { return geometry_; }
  const PatchGrid& grid() const noexcept { return grid_; }
  const PatchState& patch(PatchCoord c) const { return patches_.at(grid_.linear(c)); }

 private:
  std::optional<Token> integrate(PatchState& state, std::size_t patch_linear, const Event& e);

  TokenizerConfig config_;
  SensorGeometry geometry_;
  PatchGrid grid_;
  std::vector<std::uint32_t> col_to_patch_;
  std::vector<std::uint32_t> row_to_patch_;
  std::vector<PatchState> patches_;
  std::optional<Micros> last_t_;
};

/// Folds push_event over the stream. Residual pending groups emit nothing.
TokenStream tokenize_stream(const TokenizerConfig& config, const EventStream& stream);

/// Same result as tokenize_stream, with patches sharded across `workers`
/// threads. Output is bit-identical to the sequential fold.
TokenStream tokenize_stream_sharded(const TokenizerConfig& config, const EventStream& stream,
                                    unsigned workers);

}  // namespace sptok
