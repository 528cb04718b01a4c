#pragma once

#include <cstdint>
#include <vector>

#include "sptok/embedding.hpp"
#include "sptok/event.hpp"
#include "sptok/spiking_patches.hpp"
#include "sptok/token.hpp"

namespace sptok {

/// Structure-of-arrays event batch: four parallel columns.
struct EventColumns {
  std::vector<Micros> t;
  std::vector<std::uint16_t> x;
  std::vector<std::uint16_t> y;
  std::vector<std::int8_t> p;

  std::size_t size() const noexcept { return t.size(); }
};

/// Token batch. Token i owns member_index[offset[i] .. offset[i] + count[i]),
/// where each entry indexes the source EventColumns.
struct TokenColumns {
  std::vector<std::uint32_t> patch_x;
  std::vector<std::uint32_t> patch_y;
  std::vector<Micros> t_spike;
  std::vector<std::uint64_t> offset;
  std::vector<std::uint64_t> count;
  std::vector<std::uint64_t> member_index;

  std::size_t size() const noexcept { return t_spike.size(); }
};

EventColumns to_columns(const EventStream& stream);

/// Validates the batch. Column length mismatches throw MismatchedStreams.
EventStream from_columns(const EventColumns& columns, SensorGeometry geometry);

/// Recovers member indices by walking each patch's events in arrival
/// order. Identical duplicate events resolve to the earliest unused one.
TokenColumns to_columns(const TokenStream& tokens, const EventStream& source);

TokenColumns tokenize_columns(const EventColumns& events, SensorGeometry geometry, const TokenizerConfig& config);

/// Dense (n_tokens, P, P, 20) counts, identical to histogram_batch on the
/// equivalent TokenStream.
std::vector<std::uint32_t> histogram_columns(const TokenColumns& tokens, const EventColumns& events,
                                             std::uint32_t patch_size, const EmbeddingConfig& cfg = {});

}  // namespace sptok
