// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "firmscan/bytes.hpp"
#include "firmscan/fstree.hpp"

namespace firmscan {

struct SquashfsOptions {
  /// Upper bound on the sum of decompressed file contents.
  std::uint64_t max_total_content = 1ull << 30;
};

/// Reads a SquashFS v4 image (gzip compression) and materializes every
/// inode reachable from the root directory.
///
/// Throws CorruptSuperblock (bad magic/version/geometry),
/// UnsupportedCompressor (valid superblock, compressor other than gzip),
/// TruncatedImage (metadata or data extends past the blob) and
/// ResourceLimitExceeded.
ExtractedFs extract_squashfs(ByteView blob, const SquashfsOptions& opts = {});

}  // namespace firmscan
