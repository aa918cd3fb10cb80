// SPDX-License-Identifier: Apache-2.0
#include "firmscan/fstree.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace firmscan {

const char* to_string(FsEntryKind k) {
  switch (k) {
    case FsEntryKind::File:
      return "file";
    case FsEntryKind::Dir:
      return "dir";
    case FsEntryKind::Symlink:
      return "symlink";
  }
  return "?";
}

std::optional<FsEntryKind> fs_entry_kind_from(std::string_view s) {
  if (s == "file") return FsEntryKind::File;
  if (s == "dir") return FsEntryKind::Dir;
  if (s == "symlink") return FsEntryKind::Symlink;
  return std::nullopt;
}

std::optional<std::string> normalize_rel_path(std::string_view raw) {
  std::string out;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = raw.find('/', i);
    if (j == std::string_view::npos) j = raw.size();
    std::string_view seg = raw.substr(i, j - i);
    i = j + 1;
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") return std::nullopt;
    if (!out.empty()) out.push_back('/');
    out.append(seg);
  }
  return out;
}

namespace {

std::string_view parent_of(std::string_view path) {
  std::size_t pos = path.rfind('/');
  return pos == std::string_view::npos ? std::string_view{} : path.substr(0, pos);
}

}  // namespace

FilesystemTree FilesystemTree::build(std::string root_label, std::vector<FsEntry> entries) {
  for (const auto& e : entries) {
    if (e.path.empty()) throw std::invalid_argument("fstree: empty entry path");
    if (e.kind == FsEntryKind::Dir && e.size != 0)
      throw std::invalid_argument("fstree: directory with non-zero size: " + e.path);
    if (e.kind == FsEntryKind::File && e.content_digest.empty())
      throw std::invalid_argument("fstree: file without content digest: " + e.path);
  }

  // Synthesize missing parent directories (tar archives may omit them).
  std::set<std::string, std::less<>> known;
  for (const auto& e : entries) known.insert(e.path);
  std::vector<FsEntry> synthesized;
  for (const auto& e : entries) {
    for (std::string_view p = parent_of(e.path); !p.empty(); p = parent_of(p)) {
      if (known.count(p)) break;
      known.insert(std::string(p));
      synthesized.push_back({std::string(p), FsEntryKind::Dir, 0, 0755, {}, {}});
    }
  }
  entries.insert(entries.end(), synthesized.begin(), synthesized.end());

  std::sort(entries.begin(), entries.end(),
            [](const FsEntry& a, const FsEntry& b) { return a.path < b.path; });

  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    if (entries[i].path == entries[i + 1].path)
      throw std::invalid_argument("fstree: duplicate path: " + entries[i].path);
  }

  FilesystemTree t;
  t.root_label_ = std::move(root_label);
  t.entries_ = std::move(entries);

  for (const auto& e : t.entries_) {
    std::string_view p = parent_of(e.path);
    if (p.empty()) continue;
    const FsEntry* parent = t.find(p);
    if (parent == nullptr)
      throw std::invalid_argument("fstree: missing parent for " + e.path);
    if (parent->kind != FsEntryKind::Dir)
      throw std::invalid_argument("fstree: non-directory parent for " + e.path);
  }
  return t;
}

const FsEntry* FilesystemTree::find(std::string_view path) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), path,
                             [](const FsEntry& e, std::string_view p) { return e.path < p; });
  if (it != entries_.end() && it->path == path) return &*it;
  return nullptr;
}

void ContentStore::put(const std::string& digest, Bytes content) {
  auto [it, inserted] = blobs_.try_emplace(digest, std::move(content));
  if (inserted) total_bytes_ += it->second.size();
}

const Bytes* ContentStore::get(std::string_view digest) const {
  auto it = blobs_.find(std::string(digest));
  return it == blobs_.end() ? nullptr : &it->second;
}

ContentReader ContentStore::reader() const {
  return [this](std::string_view digest) { return get(digest); };
}

}  // namespace firmscan
