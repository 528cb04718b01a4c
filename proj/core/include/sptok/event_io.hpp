#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "sptok/event.hpp"

namespace sptok {

/// ".evs" layout, all little-endian:
///   "EVS1" | u16 version=1 | u16 width | u16 height | u16 reserved=0 | u64 count
///   count x { u64 t_us | u16 x | u16 y | u8 p (0 = -1, 1 = +1) }
inline constexpr std::array<char, 4> kEvsMagic{'E', 'V', 'S', '1'};
inline constexpr std::uint16_t kEvsVersion = 1;
inline constexpr std::size_t kEvsHeaderBytes = 4 + 2 + 2 + 2 + 2 + 8;
inline constexpr std::size_t kEvsRecordBytes = 8 + 2 + 2 + 1;

struct EvsFileHeader {
  std::uint16_t version = kEvsVersion;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint64_t count = 0;
};

void write_evs(std::ostream& out, const EventStream& stream);
void write_evs(const std::filesystem::path& path, const EventStream& stream);

/// Throws BadMagic, UnsupportedVersion, TruncatedFile(byte offset),
/// TrailingBytes(byte offset) or a validation error with the record index.
EventStream read_evs(std::istream& in);
EventStream read_evs(const std::filesystem::path& path);

/// Comma-separated "t,x,y,p" with a mandatory header row and decimal
/// integers. ParseErrorAt carries the 1-based line number.
EventStream read_csv(std::istream& in, SensorGeometry geometry);
EventStream read_csv(const std::filesystem::path& path, SensorGeometry geometry);
void write_csv(std::ostream& out, const EventStream& stream);
void write_csv(const std::filesystem::path& path, const EventStream& stream);

/// Picks the reader by extension: ".csv" uses `csv_geometry`, anything else is ".evs".
EventStream read_events(const std::filesystem::path& path, SensorGeometry csv_geometry);
void write_events(const std::filesystem::path& path, const EventStream& stream);

}  // namespace sptok
