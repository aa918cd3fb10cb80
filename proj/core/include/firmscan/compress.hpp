// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "firmscan/bytes.hpp"

namespace firmscan {

inline constexpr std::size_t kDefaultInflateLimit = 256u << 20;  // 256 MiB

/// Inflate a zlib-wrapped deflate stream (RFC 1950), as used by SquashFS
/// gzip blocks. Throws TruncatedImage on malformed input and
/// ResourceLimitExceeded past `max_out`.
Bytes zlib_inflate(ByteView in, std::size_t max_out = kDefaultInflateLimit);

/// Inflate a gzip stream (RFC 1952, 1f 8b magic).
Bytes gzip_inflate(ByteView in, std::size_t max_out = kDefaultInflateLimit);

/// Deflate with a zlib wrapper. Used by fixture builders and the cache.
Bytes zlib_deflate(ByteView in, int level = 9);

}  // namespace firmscan
