// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>

#include "firmscan/firmware.hpp"
#include "firmscan/fstree.hpp"
#include "firmscan/signatures.hpp"
#include "firmscan/squashfs.hpp"

namespace firmscan {

struct ExtractOptions {
  SquashfsOptions squashfs;
  /// Bound for inflating a gzip hit before rescanning it (one level).
  std::uint64_t max_gzip_inflated = 256u << 20;
};

struct ExtractionResult {
  ExtractedFs fs;
  SignatureHit winning_hit;
};

/// Scans the image and unpacks the first extractable filesystem hit in
/// offset order. A GzipStream hit is inflated once and rescanned at a
/// single level of nesting. JFFS2 and CramFS are detected but not
/// unpacked. Throws NoFilesystemFound when no candidate hit exists and
/// AllExtractionsFailed (with per-hit errors) when every candidate failed.
ExtractionResult extract_root_filesystem(const RawFirmware& image, const ExtractOptions& = {});

/// Writes the extracted tree under `dir` (files, dirs, symlinks) plus a
/// `manifest.json` describing every entry. Layout used by the CLI cache:
/// <cache>/extracted/<image-digest>/.
void materialize_tree(const ExtractedFs& fs, const std::filesystem::path& dir,
                      const std::string& source_digest, const SignatureHit& hit);

/// Loads a tree previously written by materialize_tree. Returns
/// std::nullopt when dir holds no manifest. Throws IoError on a manifest
/// that does not match the materialized contents.
std::optional<ExtractionResult> load_materialized_tree(const std::filesystem::path& dir);

}  // namespace firmscan
