#include "sptok/columnar.hpp"

#include <string>
#include <unordered_map>

namespace sptok {

EventColumns to_columns(const EventStream& stream) {
  EventColumns c;
  c.t.reserve(stream.size());
  c.x.reserve(stream.size());
  c.y.reserve(stream.size());
  c.p.reserve(stream.size());
  for (const Event& e : stream) {
    c.t.push_back(e.t);
    c.x.push_back(e.x);
    c.y.push_back(e.y);
    c.p.push_back(e.p);
  }
  return c;
}

EventStream from_columns(const EventColumns& columns, SensorGeometry geometry) {
  const std::size_t n = columns.t.size();
  if (columns.x.size() != n || columns.y.size() != n || columns.p.size() != n)
    throw Error(ErrorCode::MismatchedStreams, "event column lengths differ");
  std::vector<Event> events(n);
  for (std::size_t i = 0; i < n; ++i) events[i] = {columns.t[i], columns.x[i], columns.y[i], columns.p[i]};
  return validate_stream(std::move(events), geometry);
}

TokenColumns to_columns(const TokenStream& tokens, const EventStream& source) {
  const PatchGrid grid(tokens.geometry, tokens.patch_size);
  // Per-patch list of source indices in arrival order, plus a cursor.
  std::vector<std::vector<std::uint64_t>> by_patch(grid.size());
  for (std::size_t i = 0; i < source.size(); ++i)
    by_patch[grid.linear(patch_index(source[i].x, source[i].y, tokens.patch_size))].push_back(i);
  std::vector<std::size_t> cursor(grid.size(), 0);

  TokenColumns out;
  for (const Token& tok : tokens.tokens) {
    out.patch_x.push_back(tok.patch_x);
    out.patch_y.push_back(tok.patch_y);
    out.t_spike.push_back(tok.t_spike);
    out.offset.push_back(out.member_index.size());
    out.count.push_back(tok.events.size());
    if (tok.events.empty()) continue;

    const std::size_t linear = grid.linear({tok.patch_x, tok.patch_y});
    const auto& candidates = by_patch[linear];
    auto& pos = cursor[linear];
    for (const Event& member : tok.events) {
      while (pos < candidates.size() && !(source[candidates[pos]] == member)) ++pos;
      if (pos == candidates.size())
        throw Error(ErrorCode::MismatchedStreams, "token member not found in source stream");
      out.member_index.push_back(candidates[pos++]);
    }
  }
  return out;
}

TokenColumns tokenize_columns(const EventColumns& events, SensorGeometry geometry, const TokenizerConfig& config) {
  const EventStream stream = from_columns(events, geometry);
  return to_columns(tokenize_stream(config, stream), stream);
}

std::vector<std::uint32_t> histogram_columns(const TokenColumns& tokens, const EventColumns& events,
                                             std::uint32_t patch_size, const EmbeddingConfig& cfg) {
  const std::size_t n = tokens.size();
  if (tokens.patch_x.size() != n || tokens.patch_y.size() != n || tokens.offset.size() != n ||
      tokens.count.size() != n)
    throw Error(ErrorCode::MismatchedStreams, "token column lengths differ");
  std::vector<Token> materialized(n);
  for (std::size_t i = 0; i < n; ++i) {
    Token& tok = materialized[i];
    tok.patch_x = tokens.patch_x[i];
    tok.patch_y = tokens.patch_y[i];
    tok.t_spike = tokens.t_spike[i];
    if (tokens.offset[i] + tokens.count[i] > tokens.member_index.size())
      throw Error(ErrorCode::MismatchedStreams, "token offsets exceed member index column", i);
    for (std::uint64_t k = 0; k < tokens.count[i]; ++k) {
      const auto idx = tokens.member_index[tokens.offset[i] + k];
      if (idx >= events.size()) throw Error(ErrorCode::MismatchedStreams, "member index out of range", i);
      tok.events.push_back({events.t[idx], events.x[idx], events.y[idx], events.p[idx]});
    }
  }
  return histogram_batch(materialized, patch_size, cfg);
}

}  // namespace sptok
