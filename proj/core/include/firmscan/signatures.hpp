// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "firmscan/bytes.hpp"

namespace firmscan {

enum class SignatureKind {
  SquashFs,
  Jffs2,
  CramFs,
  GzipStream,
  UBootLegacy,
  TrxHeader,
};

enum class Endianness { Little, Big };

const char* to_string(SignatureKind k);

/// One magic-byte match inside a firmware image. `detail` carries whatever
/// header metadata could be read safely (version fields, image names).
struct SignatureHit {
  SignatureKind kind;
  std::uint64_t offset = 0;
  Endianness endianness = Endianness::Little;
  std::string detail;

  bool operator==(const SignatureHit&) const = default;
};

/// Scans the whole image for known filesystem and container magics.
/// Pure; never fails; hits are sorted by offset and overlapping hits are
/// all reported. JFFS2 magics are only considered on 4-byte node
/// boundaries.
std::vector<SignatureHit> scan_signatures(ByteView image);

/// Exact byte slice [start, end). Throws RangeError when
/// 0 <= start <= end <= image.size() does not hold.
Bytes carve_region(ByteView image, std::uint64_t start, std::uint64_t end);

/// Carve from `start` to end-of-image.
Bytes carve_region(ByteView image, std::uint64_t start);

}  // namespace firmscan
