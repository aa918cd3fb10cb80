// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "firmscan/bytes.hpp"

namespace firmscan {

enum class FsEntryKind { File, Dir, Symlink };

const char* to_string(FsEntryKind k);
std::optional<FsEntryKind> fs_entry_kind_from(std::string_view s);

/// One entry of an extracted root filesystem. Paths are stored as the raw
/// bytes found in the image, relative, '/'-separated, with no leading
/// slash and no "." / ".." components; use display_lossy() for printing.
struct FsEntry {
  std::string path;
  FsEntryKind kind = FsEntryKind::File;
  std::uint64_t size = 0;
  std::uint16_t mode = 0;
  std::string content_digest;  // SHA-256 hex, files only
  std::string link_target;     // symlinks only

  bool operator==(const FsEntry&) const = default;
};

/// Immutable, sorted view of an extracted filesystem.
///
/// Invariants (enforced by build()): paths unique and sorted
/// lexicographically by bytes; every non-root entry's parent directory is
/// present; directories have size 0; files carry a content digest.
class FilesystemTree {
 public:
  FilesystemTree() = default;

  /// Normalizes, sorts and validates `entries`. Missing parent directories
  /// are synthesized (mode 0755) so archives that omit directory entries
  /// still produce a well-formed tree. Throws std::invalid_argument on
  /// duplicate paths or a file used as a directory.
  static FilesystemTree build(std::string root_label, std::vector<FsEntry> entries);

  const std::string& root_label() const { return root_label_; }
  const std::vector<FsEntry>& entries() const { return entries_; }
  const FsEntry* find(std::string_view path) const;
  bool empty() const { return entries_.empty(); }

  bool operator==(const FilesystemTree&) const = default;

 private:
  std::string root_label_;
  std::vector<FsEntry> entries_;
};

/// Joins and normalizes a relative path: drops empty and "." segments,
/// strips leading slashes. Returns std::nullopt when the path escapes the
/// root ("..") — callers decide whether that is an error.
std::optional<std::string> normalize_rel_path(std::string_view raw);

/// Resolves content digests to bytes; returns nullptr when unknown.
using ContentReader = std::function<const Bytes*(std::string_view digest)>;

/// In-memory digest -> content map filled during extraction.
class ContentStore {
 public:
  void put(const std::string& digest, Bytes content);
  const Bytes* get(std::string_view digest) const;
  std::size_t count() const { return blobs_.size(); }
  std::uint64_t total_bytes() const { return total_bytes_; }

  /// Adapter usable as a ContentReader. The store must outlive the reader.
  ContentReader reader() const;

 private:
  std::unordered_map<std::string, Bytes> blobs_;
  std::uint64_t total_bytes_ = 0;
};

/// An extracted filesystem: the tree plus the file contents backing it.
struct ExtractedFs {
  FilesystemTree tree;
  ContentStore contents;
};

}  // namespace firmscan
