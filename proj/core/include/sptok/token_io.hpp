#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sptok/token.hpp"

namespace sptok {

/// Token files are JSON Lines. The first line is a header object
///   {"format":"sptok.tokens","version":1,"width":W,"height":H,"patch_size":P,
///    "method":"...","params":{...}}
/// followed by one object per token
///   {"patch_x":X,"patch_y":Y,"t_spike_us":T,"n_events":N[,"events":[[t,x,y,p],...]]}
struct TokenFileMeta {
  std::string method;
  std::vector<std::pair<std::string, std::string>> params;
};

struct TokenFile {
  TokenFileMeta meta;
  TokenStream stream;
  /// n_events per token; equals stream.tokens[i].events.size() when `has_events`.
  std::vector<std::size_t> event_counts;
  bool has_events = false;
};

void write_tokens(std::ostream& out, const TokenStream& stream, const TokenFileMeta& meta, bool with_events);
void write_tokens(const std::filesystem::path& path, const TokenStream& stream, const TokenFileMeta& meta,
                  bool with_events);

/// Throws ParseErrorAt(line) for malformed input.
TokenFile read_tokens(std::istream& in);
TokenFile read_tokens(const std::filesystem::path& path);

}  // namespace sptok
