#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

// Little-endian encode/decode independent of host byte order.
namespace sptok::le {

template <typename T>
inline void put(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
inline T get(const unsigned char* p) noexcept {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

template <typename T>
inline bool read(std::istream& in, T& value) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) return false;
  value = get<T>(buf);
  return true;
}

}  // namespace sptok::le
