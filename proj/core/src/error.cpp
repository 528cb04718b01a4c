#include "sptok/error.hpp"

namespace sptok {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsortedAt: return "UnsortedAt";
    case ErrorCode::OutOfBoundsAt: return "OutOfBoundsAt";
    case ErrorCode::BadPolarityAt: return "BadPolarityAt";
    case ErrorCode::ZeroPatchSize: return "ZeroPatchSize";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::InvertedWindow: return "InvertedWindow";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::EventOutsidePatch: return "EventOutsidePatch";
    case ErrorCode::NegativeDelta: return "NegativeDelta";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::EmptyTimeRange: return "EmptyTimeRange";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::MismatchedStreams: return "MismatchedStreams";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::ParseErrorAt: return "ParseErrorAt";
    case ErrorCode::SpecOutOfBounds: return "SpecOutOfBounds";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::optional<std::size_t> index) {
  std::string out{to_string(code)};
  if (index) out += "(" + std::to_string(*index) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> index)
    : std::runtime_error(decorate(code, message, index)), code_(code), index_(index) {}

}  // namespace sptok
