// SPDX-License-Identifier: Apache-2.0
#include "firmscan/extraction.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "firmscan/compress.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/hash.hpp"

namespace firmscan {

namespace {

bool is_filesystem_candidate(SignatureKind k) {
  switch (k) {
    case SignatureKind::SquashFs:
    case SignatureKind::Jffs2:
    case SignatureKind::CramFs:
    case SignatureKind::GzipStream:
      return true;
    case SignatureKind::UBootLegacy:
    case SignatureKind::TrxHeader:
      return false;  // container headers, not filesystems
  }
  return false;
}

std::string hit_label(const SignatureHit& h) {
  return std::string(to_string(h.kind)) + "@0x" + [&] {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(h.offset));
    return std::string(buf);
  }();
}

ExtractedFs try_extract_hit(ByteView image, const SignatureHit& hit, const ExtractOptions& opts,
                            std::string* nested_note) {
  switch (hit.kind) {
    case SignatureKind::SquashFs: {
      if (hit.endianness == Endianness::Big) {
        throw CorruptSuperblock("big-endian squashfs is pre-4.0 and not extractable");
      }
      return extract_squashfs(image.subspan(hit.offset), opts.squashfs);
    }
    case SignatureKind::GzipStream: {
      Bytes inflated = gzip_inflate(image.subspan(hit.offset), opts.max_gzip_inflated);
      // One level of nesting: rescan the inflated stream for real
      // filesystems (uImage/gzip/squashfs layering).
      for (const SignatureHit& inner : scan_signatures(ByteView(inflated))) {
        if (inner.kind == SignatureKind::SquashFs && inner.endianness == Endianness::Little) {
          ExtractedFs fs =
              extract_squashfs(ByteView(inflated).subspan(inner.offset), opts.squashfs);
          if (nested_note != nullptr) {
            *nested_note = "nested " + hit_label(inner) + " inside inflated stream";
          }
          return fs;
        }
      }
      throw NoFilesystemFound("inflated gzip stream contains no extractable filesystem");
    }
    case SignatureKind::Jffs2:
      throw UnsupportedArchive("jffs2 content extraction is not supported (detection only)");
    case SignatureKind::CramFs:
      throw UnsupportedArchive("cramfs content extraction is not supported (detection only)");
    default:
      throw NoFilesystemFound("not a filesystem signature");
  }
}

}  // namespace

ExtractionResult extract_root_filesystem(const RawFirmware& image, const ExtractOptions& opts) {
  std::vector<SignatureHit> hits = scan_signatures(image.view());
  std::vector<const SignatureHit*> candidates;
  for (const auto& h : hits) {
    if (is_filesystem_candidate(h.kind)) candidates.push_back(&h);
  }
  if (candidates.empty()) {
    throw NoFilesystemFound("no filesystem signature in image " + image.source_id + " (" +
                            std::to_string(image.size()) + " bytes, " +
                            std::to_string(hits.size()) + " non-filesystem hits)");
  }

  std::vector<std::string> failures;
  for (const SignatureHit* hit : candidates) {
    try {
      std::string nested_note;
      ExtractedFs fs = try_extract_hit(image.view(), *hit, opts, &nested_note);
      SignatureHit winning = *hit;
      if (!nested_note.empty()) {
        winning.detail = winning.detail.empty() ? nested_note : winning.detail + "; " + nested_note;
      }
      return {std::move(fs), std::move(winning)};
    } catch (const Error& e) {
      failures.push_back(hit_label(*hit) + ": " + e.what());
    }
  }
  throw AllExtractionsFailed("all " + std::to_string(failures.size()) +
                                 " candidate filesystem hits failed to extract",
                             std::move(failures));
}

// ---- cache materialization --------------------------------------------

namespace {

constexpr int kManifestVersion = 1;

nlohmann::ordered_json hit_to_json(const SignatureHit& h) {
  return {{"kind", to_string(h.kind)},
          {"offset", h.offset},
          {"endianness", h.endianness == Endianness::Little ? "little" : "big"},
          {"detail", h.detail}};
}

SignatureHit hit_from_json(const nlohmann::json& j) {
  SignatureHit h;
  std::string kind = j.at("kind").get<std::string>();
  const SignatureKind kinds[] = {SignatureKind::SquashFs,    SignatureKind::Jffs2,
                                 SignatureKind::CramFs,      SignatureKind::GzipStream,
                                 SignatureKind::UBootLegacy, SignatureKind::TrxHeader};
  bool found = false;
  for (SignatureKind k : kinds) {
    if (kind == to_string(k)) {
      h.kind = k;
      found = true;
      break;
    }
  }
  if (!found) throw IoError("manifest: unknown signature kind " + kind);
  h.offset = j.at("offset").get<std::uint64_t>();
  h.endianness =
      j.at("endianness").get<std::string>() == "big" ? Endianness::Big : Endianness::Little;
  h.detail = j.value("detail", "");
  return h;
}

}  // namespace

void materialize_tree(const ExtractedFs& fs, const std::filesystem::path& dir,
                      const std::string& source_digest, const SignatureHit& hit) {
  namespace stdfs = std::filesystem;
  std::error_code ec;
  stdfs::create_directories(dir / "fs", ec);
  if (ec) throw IoError("cannot create cache directory " + dir.string());

  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const FsEntry& e : fs.tree.entries()) {
    stdfs::path target = dir / "fs" / stdfs::path(e.path);
    switch (e.kind) {
      case FsEntryKind::Dir:
        stdfs::create_directories(target, ec);
        break;
      case FsEntryKind::File: {
        const Bytes* content = fs.contents.get(e.content_digest);
        if (content == nullptr) throw IoError("missing content for " + e.path);
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + target.string());
        out.write(reinterpret_cast<const char*>(content->data()),
                  static_cast<std::streamsize>(content->size()));
        if (!out) throw IoError("write error on " + target.string());
        break;
      }
      case FsEntryKind::Symlink:
        stdfs::remove(target, ec);
        stdfs::create_symlink(e.link_target, target, ec);
        // Dangling or unrepresentable targets still end up in the manifest.
        break;
    }
    entries.push_back({{"path", e.path},
                       {"kind", to_string(e.kind)},
                       {"size", e.size},
                       {"mode", e.mode},
                       {"digest", e.content_digest},
                       {"link_target", e.link_target}});
  }

  nlohmann::ordered_json manifest{{"format_version", kManifestVersion},
                                  {"source_digest", source_digest},
                                  {"winning_hit", hit_to_json(hit)},
                                  {"entries", std::move(entries)}};
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write manifest under " + dir.string());
  out << manifest.dump(2) << "\n";
}

std::optional<ExtractionResult> load_materialized_tree(const std::filesystem::path& dir) {
  namespace stdfs = std::filesystem;
  stdfs::path manifest_path = dir / "manifest.json";
  if (!stdfs::exists(manifest_path)) return std::nullopt;

  std::ifstream in(manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt cache manifest " + manifest_path.string() + ": " + e.what());
  }
  if (manifest.value("format_version", 0) != kManifestVersion) {
    throw IoError("cache manifest format version mismatch in " + manifest_path.string());
  }

  ExtractionResult result;
  result.winning_hit = hit_from_json(manifest.at("winning_hit"));
  std::vector<FsEntry> entries;
  for (const auto& j : manifest.at("entries")) {
    FsEntry e;
    e.path = j.at("path").get<std::string>();
    auto kind = fs_entry_kind_from(j.at("kind").get<std::string>());
    if (!kind) throw IoError("cache manifest: bad entry kind");
    e.kind = *kind;
    e.size = j.at("size").get<std::uint64_t>();
    e.mode = static_cast<std::uint16_t>(j.at("mode").get<unsigned>());
    e.content_digest = j.at("digest").get<std::string>();
    e.link_target = j.at("link_target").get<std::string>();
    if (e.kind == FsEntryKind::File) {
      std::ifstream f(dir / "fs" / stdfs::path(e.path), std::ios::binary);
      if (!f) throw IoError("cache is missing materialized file " + e.path);
      Bytes content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
      if (sha256_hex(ByteView(content)) != e.content_digest) {
        throw IoError("cache content digest mismatch for " + e.path);
      }
      result.fs.contents.put(e.content_digest, std::move(content));
    }
    entries.push_back(std::move(e));
  }
  result.fs.tree = FilesystemTree::build("", std::move(entries));
  return result;
}

}  // namespace firmscan
