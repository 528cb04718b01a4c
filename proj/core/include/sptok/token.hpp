#pragma once

#include <cstdint>
#include <vector>

#include "sptok/event.hpp"

namespace sptok {

/// A group of events from one patch, stamped with its emission time.
/// For spiking patches `t_spike` is the time of the last member event; for
/// the synchronous baselines it is the end of the window. Frame tokens may
/// carry no events.
struct Token {
  std::uint32_t patch_x = 0;
  std::uint32_t patch_y = 0;
  Micros t_spike = 0;
  std::vector<Event> events;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Tokens ordered by (t_spike, patch_y, patch_x); ties with identical keys
/// keep emission order.
struct TokenStream {
  SensorGeometry geometry;
  std::uint32_t patch_size = 1;
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  /// Sum of member-event counts over all tokens.
  std::size_t event_count() const noexcept;
  /// [first t_spike, last t_spike + 1); empty when there are no tokens.
  TimeRange span() const noexcept;

  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

bool token_order_less(const Token& a, const Token& b) noexcept;

/// Stable sort into canonical (t_spike, patch_y, patch_x) order.
void sort_tokens(std::vector<Token>& tokens);

/// Tokens with t0 <= t_spike < t1. Member events are kept whole even when
/// they predate t0.
TokenStream window_slice(const TokenStream& stream, Micros t0, Micros t1);

}  // namespace sptok
