// SPDX-License-Identifier: Apache-2.0
#include "firmscan/bytes.hpp"

#include <cstring>

namespace firmscan {

std::uint16_t read_le16(ByteView b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t read_le32(ByteView b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint64_t read_le64(ByteView b, std::size_t off) {
  return static_cast<std::uint64_t>(read_le32(b, off)) |
         (static_cast<std::uint64_t>(read_le32(b, off + 4)) << 32);
}

std::uint16_t read_be16(ByteView b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t read_be32(ByteView b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) |
         (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) | static_cast<std::uint32_t>(b[off + 3]);
}

void write_le16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void write_le32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void write_le64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::string to_hex(ByteView b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (std::uint8_t c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

Bytes bytes_of(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

std::string string_of(ByteView b) {
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

ByteView view_of(std::string_view s) {
  return ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

bool is_printable_ascii(std::uint8_t c) {
  return c >= 0x20 && c < 0x7f;
}

std::string display_lossy(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  auto cont = [&](std::size_t k) {
    for (std::size_t j = 1; j <= k; ++j) {
      if (i + j >= raw.size()) return false;
      if ((static_cast<unsigned char>(raw[i + j]) & 0xc0) != 0x80) return false;
    }
    return true;
  };
  while (i < raw.size()) {
    auto c = static_cast<unsigned char>(raw[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xe0) == 0xc0 && cont(1)) {
      len = 2;
    } else if ((c & 0xf0) == 0xe0 && cont(2)) {
      len = 3;
    } else if ((c & 0xf8) == 0xf0 && cont(3)) {
      len = 4;
    }
    if (len == 0) {
      out += "\xef\xbf\xbd";  // U+FFFD
      ++i;
    } else {
      out.append(raw.substr(i, len));
      i += len;
    }
  }
  return out;
}

}  // namespace firmscan
