#include "sptok/event_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "le.hpp"

namespace sptok {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

bool has_csv_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv";
}

}  // namespace

void write_evs(std::ostream& out, const EventStream& stream) {
  const auto& g = stream.geometry();
  if (g.width > 0xFFFF || g.height > 0xFFFF)
    throw Error(ErrorCode::InvalidGeometry, "geometry does not fit the u16 header fields");
  out.write(kEvsMagic.data(), kEvsMagic.size());
  le::put<std::uint16_t>(out, kEvsVersion);
  le::put<std::uint16_t>(out, static_cast<std::uint16_t>(g.width));
  le::put<std::uint16_t>(out, static_cast<std::uint16_t>(g.height));
  le::put<std::uint16_t>(out, 0);
  le::put<std::uint64_t>(out, stream.size());

  std::vector<unsigned char> buf(stream.size() * kEvsRecordBytes);
  unsigned char* p = buf.data();
  for (const Event& e : stream) {
    for (int i = 0; i < 8; ++i) *p++ = static_cast<unsigned char>(e.t >> (8 * i));
    *p++ = static_cast<unsigned char>(e.x);
    *p++ = static_cast<unsigned char>(e.x >> 8);
    *p++ = static_cast<unsigned char>(e.y);
    *p++ = static_cast<unsigned char>(e.y >> 8);
    *p++ = e.p > 0 ? 1 : 0;
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing events");
}

void write_evs(const std::filesystem::path& path, const EventStream& stream) {
  auto out = open_out(path);
  write_evs(out, stream);
}

EventStream read_evs(std::istream& in) {
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const std::size_t size = bytes.size();
  if (size < kEvsMagic.size() || !std::equal(kEvsMagic.begin(), kEvsMagic.end(), bytes.begin()))
    throw Error(ErrorCode::BadMagic, "not an EVS1 file");
  if (size < kEvsHeaderBytes) throw Error(ErrorCode::TruncatedFile, "header", size);

  const unsigned char* h = bytes.data();
  EvsFileHeader header;
  header.version = le::get<std::uint16_t>(h + 4);
  header.width = le::get<std::uint16_t>(h + 6);
  header.height = le::get<std::uint16_t>(h + 8);
  header.count = le::get<std::uint64_t>(h + 12);
  if (header.version != kEvsVersion)
    throw Error(ErrorCode::UnsupportedVersion, "version " + std::to_string(header.version));

  const std::size_t available = (size - kEvsHeaderBytes) / kEvsRecordBytes;
  if (header.count > available) {
    throw Error(ErrorCode::TruncatedFile,
                "header declares " + std::to_string(header.count) + " records, found " + std::to_string(available),
                kEvsHeaderBytes + available * kEvsRecordBytes);
  }
  const std::size_t expected_size = kEvsHeaderBytes + header.count * kEvsRecordBytes;
  if (size != expected_size) throw Error(ErrorCode::TrailingBytes, "data after last record", expected_size);

  std::vector<Event> events(header.count);
  const unsigned char* r = h + kEvsHeaderBytes;
  for (auto& e : events) {
    e.t = le::get<std::uint64_t>(r);
    e.x = le::get<std::uint16_t>(r + 8);
    e.y = le::get<std::uint16_t>(r + 10);
    e.p = r[12] == 1 ? 1 : (r[12] == 0 ? -1 : 0);  // anything else fails validation
    r += kEvsRecordBytes;
  }
  return validate_stream(std::move(events), {header.width, header.height});
}

EventStream read_evs(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_evs(in);
}

EventStream read_csv(std::istream& in, SensorGeometry geometry) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseErrorAt, "missing header row", line_no);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,p") throw Error(ErrorCode::ParseErrorAt, "header must be 't,x,y,p'", line_no);

  std::vector<Event> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::int64_t fields[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int f = 0; f < 4; ++f) {
      auto [next, ec] = std::from_chars(p, end, fields[f]);
      if (ec != std::errc{} || (f < 3 ? (next == end || *next != ',') : next != end))
        throw Error(ErrorCode::ParseErrorAt, "expected four comma-separated integers", line_no);
      p = next + 1;
    }
    const auto [t, x, y, pol] = fields;
    if (t < 0 || x < 0 || y < 0 || x > 0xFFFF || y > 0xFFFF)
      throw Error(ErrorCode::ParseErrorAt, "negative or oversized field", line_no);
    if (pol != 1 && pol != -1) throw Error(ErrorCode::ParseErrorAt, "polarity must be -1 or 1", line_no);
    events.push_back({static_cast<Micros>(t), static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                      static_cast<std::int8_t>(pol)});
  }
  return validate_stream(std::move(events), geometry);
}

EventStream read_csv(const std::filesystem::path& path, SensorGeometry geometry) {
  auto in = open_in(path);
  return read_csv(in, geometry);
}

void write_csv(std::ostream& out, const EventStream& stream) {
  out << "t,x,y,p\n";
  for (const Event& e : stream) out << e.t << ',' << e.x << ',' << e.y << ',' << int{e.p} << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing csv");
}

void write_csv(const std::filesystem::path& path, const EventStream& stream) {
  auto out = open_out(path);
  write_csv(out, stream);
}

EventStream read_events(const std::filesystem::path& path, SensorGeometry csv_geometry) {
  return has_csv_extension(path) ? read_csv(path, csv_geometry) : read_evs(path);
}

void write_events(const std::filesystem::path& path, const EventStream& stream) {
  if (has_csv_extension(path))
    write_csv(path, stream);
  else
    write_evs(path, stream);
}

}  // namespace sptok
