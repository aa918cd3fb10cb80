// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace firmscan {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Unaligned little/big-endian reads. Callers are responsible for bounds;
// the checked_* variants throw TruncatedImage.
std::uint16_t read_le16(ByteView b, std::size_t off);
std::uint32_t read_le32(ByteView b, std::size_t off);
std::uint64_t read_le64(ByteView b, std::size_t off);
std::uint16_t read_be16(ByteView b, std::size_t off);
std::uint32_t read_be32(ByteView b, std::size_t off);

void write_le16(Bytes& out, std::uint16_t v);
void write_le32(Bytes& out, std::uint32_t v);
void write_le64(Bytes& out, std::uint64_t v);

std::string to_hex(ByteView b);

Bytes bytes_of(std::string_view s);
std::string string_of(ByteView b);
ByteView view_of(std::string_view s);

/// Lossy UTF-8 sanitizer for displaying raw firmware paths: invalid bytes
/// become U+FFFD.
std::string display_lossy(std::string_view raw);

bool is_printable_ascii(std::uint8_t c);

}  // namespace firmscan
