// SPDX-License-Identifier: Apache-2.0
#include "firmscan/archive.hpp"

#include <cstring>
#include <fstream>
#include <utility>

#include "firmscan/errors.hpp"
#include "firmscan/hash.hpp"

namespace firmscan {

namespace {

ExtractedFs load_from_directory(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  ExtractedFs out;
  std::vector<FsEntry> entries;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::none);
       it != fs::recursive_directory_iterator(); ++it) {
    const fs::path& p = it->path();
    auto rel = normalize_rel_path(p.lexically_relative(root).generic_string());
    if (!rel || rel->empty()) continue;

    fs::file_status st = fs::symlink_status(p);
    auto mode = static_cast<std::uint16_t>(static_cast<unsigned>(st.permissions()) & 07777);
    if (fs::is_symlink(st)) {
      std::string target = fs::read_symlink(p).string();
      entries.push_back({*rel, FsEntryKind::Symlink, target.size(), mode, {}, target});
      it.disable_recursion_pending();  // never follow links
    } else if (fs::is_directory(st)) {
      entries.push_back({*rel, FsEntryKind::Dir, 0, mode, {}, {}});
    } else if (fs::is_regular_file(st)) {
      std::ifstream in(p, std::ios::binary);
      if (!in) throw IoError("cannot read " + p.string());
      Bytes content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      std::string digest = sha256_hex(ByteView(content));
      entries.push_back({*rel, FsEntryKind::File, content.size(), mode, digest, {}});
      out.contents.put(digest, std::move(content));
    }
    // other kinds (devices, fifos, sockets) are skipped
  }
  out.tree = FilesystemTree::build("", std::move(entries));
  return out;
}

std::uint64_t parse_octal(const char* field, std::size_t len) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    char c = field[i];
    if (c == '\0' || c == ' ') break;
    if (c < '0' || c > '7') throw UnsupportedArchive("tar: non-octal numeric field");
    v = v * 8 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::string field_string(const char* field, std::size_t len) {
  std::size_t n = 0;
  while (n < len && field[n] != '\0') ++n;
  return std::string(field, n);
}

}  // namespace

ExtractedFs load_tree_from_tar(ByteView data) {
  ExtractedFs out;
  std::vector<FsEntry> entries;
  std::size_t off = 0;
  std::string pending_long_name;
  bool saw_header = false;

  while (off + 512 <= data.size()) {
    const char* hdr = reinterpret_cast<const char*>(data.data() + off);
    bool all_zero = true;
    for (std::size_t i = 0; i < 512 && all_zero; ++i) all_zero = hdr[i] == '\0';
    if (all_zero) break;  // end-of-archive marker

    if (std::memcmp(hdr + 257, "ustar", 5) != 0) {
      throw UnsupportedArchive("tar: missing ustar magic at offset " + std::to_string(off));
    }
    saw_header = true;

    std::uint64_t size = parse_octal(hdr + 124, 12);
    auto mode = static_cast<std::uint16_t>(parse_octal(hdr + 100, 8) & 07777);
    char typeflag = hdr[156];
    std::string name = field_string(hdr, 100);
    std::string prefix = field_string(hdr + 345, 155);
    if (!prefix.empty()) name = prefix + "/" + name;
    if (!pending_long_name.empty()) {
      name = std::exchange(pending_long_name, {});
    }

    std::uint64_t padded = (size + 511) & ~511ull;
    if (off + 512 + padded > data.size()) {
      throw UnsupportedArchive("tar: entry content extends past archive end");
    }
    ByteView content = data.subspan(off + 512, size);
    off += 512 + padded;

    switch (typeflag) {
      case 'L': {  // GNU long name, applies to the next entry
        pending_long_name = field_string(reinterpret_cast<const char*>(content.data()), size);
        continue;
      }
      case 'x':
      case 'g':  // pax headers: metadata only, skip
        continue;
      default:
        break;
    }

    auto rel = normalize_rel_path(name);
    if (!rel) throw UnsupportedArchive("tar: entry path escapes the root: " + name);
    if (rel->empty()) continue;

    switch (typeflag) {
      case '0':
      case '\0':
      case '7': {
        Bytes bytes(content.begin(), content.end());
        std::string digest = sha256_hex(ByteView(bytes));
        entries.push_back({*rel, FsEntryKind::File, size, mode, digest, {}});
        out.contents.put(digest, std::move(bytes));
        break;
      }
      case '5':
        entries.push_back({*rel, FsEntryKind::Dir, 0, mode, {}, {}});
        break;
      case '2': {
        std::string target = field_string(hdr + 157, 100);
        entries.push_back({*rel, FsEntryKind::Symlink, target.size(), mode, {}, target});
        break;
      }
      case '1':  // hard link: ignore, content lives at the link target
      case '3':
      case '4':
      case '6':
        break;
      default:
        throw UnsupportedArchive(std::string("tar: unsupported entry type '") + typeflag + "'");
    }
  }

  if (!saw_header && !data.empty()) {
    throw UnsupportedArchive("tar: no ustar header found");
  }
  out.tree = FilesystemTree::build("", std::move(entries));
  return out;
}

ExtractedFs load_tree_from_archive(const std::filesystem::path& path) {
  std::error_code ec;
  auto st = std::filesystem::status(path, ec);
  if (ec || !std::filesystem::exists(st)) {
    throw IoError("no such file or directory: " + path.string());
  }
  if (std::filesystem::is_directory(st)) {
    return load_from_directory(path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on " + path.string());
  return load_tree_from_tar(ByteView(data));
}

}  // namespace firmscan
