// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "firmscan/fstree.hpp"

namespace firmscan {

/// Ingestion path for pre-extracted root filesystems: `path` is either a
/// directory (walked recursively) or a POSIX ustar archive. Device nodes,
/// fifos and sockets are skipped. Throws IoError and UnsupportedArchive.
ExtractedFs load_tree_from_archive(const std::filesystem::path& path);

/// Same, for a tar archive already in memory.
ExtractedFs load_tree_from_tar(ByteView data);

}  // namespace firmscan
