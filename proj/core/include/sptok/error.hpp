#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sptok {

enum class ErrorCode {
  // stream validation
  UnsortedAt,
  OutOfBoundsAt,
  BadPolarityAt,
  // geometry / windows
  ZeroPatchSize,
  InvalidGeometry,
  InvertedWindow,
  // tokenizers
  InvalidConfig,
  NonMonotonicTime,
  OutOfBounds,
  // embedding
  EventOutsidePatch,
  NegativeDelta,
  ZeroScale,
  // analysis
  EmptyTimeRange,
  EmptyStream,
  MismatchedStreams,
  // io
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  TrailingBytes,
  ParseErrorAt,
  SpecOutOfBounds,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. `index()` carries the offending record index,
/// line number or byte offset for the codes that name a position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace sptok
