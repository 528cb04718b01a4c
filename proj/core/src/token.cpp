#include "sptok/token.hpp"

#include <algorithm>
#include <tuple>

namespace sptok {

std::size_t TokenStream::event_count() const noexcept {
  std::size_t n = 0;
  for (const auto& tok : tokens) n += tok.events.size();
  return n;
}

TimeRange TokenStream::span() const noexcept {
  if (tokens.empty()) return {};
  return {tokens.front().t_spike, tokens.back().t_spike + 1};
}

bool token_order_less(const Token& a, const Token& b) noexcept {
  return std::tie(a.t_spike, a.patch_y, a.patch_x) < std::tie(b.t_spike, b.patch_y, b.patch_x);
}

void sort_tokens(std::vector<Token>& tokens) {
  // Producers emit in time order already, so only runs sharing a timestamp
  // need reordering.
  auto run_begin = tokens.begin();
  while (run_begin != tokens.end()) {
    auto run_end = std::find_if(run_begin, tokens.end(),
                                [t = run_begin->t_spike](const Token& tok) { return tok.t_spike != t; });
    if (run_end != tokens.end() && run_end->t_spike < run_begin->t_spike) {
      std::stable_sort(tokens.begin(), tokens.end(), token_order_less);
      return;
    }
    if (std::distance(run_begin, run_end) > 1) std::stable_sort(run_begin, run_end, token_order_less);
    run_begin = run_end;
  }
}

TokenStream window_slice(const TokenStream& stream, Micros t0, Micros t1) {
  if (t0 > t1) throw Error(ErrorCode::InvertedWindow, "t0 > t1");
  auto first = std::partition_point(stream.tokens.begin(), stream.tokens.end(),
                                    [t0](const Token& tok) { return tok.t_spike < t0; });
  auto last = std::partition_point(first, stream.tokens.end(),
                                   [t1](const Token& tok) { return tok.t_spike < t1; });
  return TokenStream{stream.geometry, stream.patch_size, std::vector<Token>(first, last)};
}

}  // namespace sptok
