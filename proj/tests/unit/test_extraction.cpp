// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <zlib.h>

#include <random>

#include "firmscan/compress.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/extraction.hpp"
#include "fixtures.hpp"
#include "squashfs_writer.hpp"
#include "temp_dir.hpp"

using namespace firmscan;
using fstest::PackEntry;

TEST_CASE("u-boot header + squashfs at 0x40000 extracts from the right offset") {
  auto entries = fstest::rootfs_busybox_openssl();
  RawFirmware fw =
      RawFirmware::from_bytes("fixture", fstest::firmware_with_uboot_header(entries, 0x40000));

  auto hits = scan_signatures(fw.view());
  REQUIRE(hits.size() >= 2);
  CHECK(hits.front().kind == SignatureKind::UBootLegacy);
  CHECK(hits.front().offset == 0);
  bool squash_at_expected = false;
  for (const auto& h : hits) {
    squash_at_expected =
        squash_at_expected || (h.kind == SignatureKind::SquashFs && h.offset == 0x40000);
  }
  CHECK(squash_at_expected);

  ExtractionResult result = extract_root_filesystem(fw);
  CHECK(result.winning_hit.kind == SignatureKind::SquashFs);
  CHECK(result.winning_hit.offset == 0x40000);
  CHECK(result.fs.tree.find("bin/busybox") != nullptr);

  // carving at the winning hit re-scans to a squashfs at offset 0
  Bytes carved = carve_region(fw.view(), result.winning_hit.offset);
  auto inner = scan_signatures(ByteView(carved));
  REQUIRE(!inner.empty());
  CHECK(inner.front().kind == SignatureKind::SquashFs);
  CHECK(inner.front().offset == 0);
}

TEST_CASE("random bytes: NoFilesystemFound") {
  std::mt19937 rng(31337);
  Bytes junk(4096);
  for (auto& b : junk) b = static_cast<std::uint8_t>(rng() % 16);  // avoids all magic prefixes
  RawFirmware fw = RawFirmware::from_bytes("junk", std::move(junk));
  CHECK_THROWS_AS(extract_root_filesystem(fw), NoFilesystemFound);
}

TEST_CASE("jffs2-only image: AllExtractionsFailed listing the unsupported hit") {
  Bytes img(64, 0);
  img[0] = 0x85;
  img[1] = 0x19;
  RawFirmware fw = RawFirmware::from_bytes("jffs2", std::move(img));
  try {
    extract_root_filesystem(fw);
    FAIL("expected AllExtractionsFailed");
  } catch (const AllExtractionsFailed& e) {
    REQUIRE(e.per_hit_errors.size() == 1);
    CHECK(e.per_hit_errors[0].find("jffs2@0x0") != std::string::npos);
    CHECK(e.per_hit_errors[0].find("not supported") != std::string::npos);
  }
}

TEST_CASE("first extractable hit wins in offset order") {
  // corrupt squashfs magic first, valid one later
  Bytes image(512, 0);
  image[0] = 0x68;
  image[1] = 0x73;
  image[2] = 0x71;
  image[3] = 0x73;  // bare magic, truncated superblock -> fails
  Bytes valid = fstest::pack_squashfs({{"ok.txt", PackEntry::Kind::File, bytes_of("ok"), {}, 0644}});
  image.insert(image.end(), valid.begin(), valid.end());

  RawFirmware fw = RawFirmware::from_bytes("two-hits", std::move(image));
  ExtractionResult result = extract_root_filesystem(fw);
  CHECK(result.winning_hit.offset == 512);
  CHECK(result.fs.tree.find("ok.txt") != nullptr);
}

TEST_CASE("gzip-wrapped squashfs is inflated once and extracted") {
  Bytes fs_image = fstest::pack_squashfs({{"nested.txt", PackEntry::Kind::File,
                                           bytes_of("nested content"), {}, 0644}});
  // wrap with real gzip framing (deflateInit2 with windowBits 15+16)
  z_stream zs{};
  REQUIRE(deflateInit2(&zs, 9, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) == Z_OK);
  Bytes gz(deflateBound(&zs, static_cast<uLong>(fs_image.size())) + 32);
  zs.next_in = fs_image.data();
  zs.avail_in = static_cast<uInt>(fs_image.size());
  zs.next_out = gz.data();
  zs.avail_out = static_cast<uInt>(gz.size());
  REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
  gz.resize(zs.total_out);
  deflateEnd(&zs);

  RawFirmware fw = RawFirmware::from_bytes("gz", std::move(gz));
  ExtractionResult result = extract_root_filesystem(fw);
  CHECK(result.winning_hit.kind == SignatureKind::GzipStream);
  CHECK(result.winning_hit.detail.find("nested") != std::string::npos);
  CHECK(result.fs.tree.find("nested.txt") != nullptr);
}

TEST_CASE("cache round-trip preserves tree and contents") {
  fstest::TempDir tmp("cache");
  auto entries = fstest::rootfs_dnsmasq_zlib();
  Bytes image = fstest::firmware_plain(entries);
  RawFirmware fw = RawFirmware::from_bytes("cached", std::move(image));
  ExtractionResult extracted = extract_root_filesystem(fw);

  auto dir = tmp / "extracted" / fw.digest;
  materialize_tree(extracted.fs, dir, fw.digest, extracted.winning_hit);
  auto loaded = load_materialized_tree(dir);
  REQUIRE(loaded.has_value());
  CHECK(loaded->winning_hit == extracted.winning_hit);
  CHECK(loaded->fs.tree == extracted.fs.tree);
  for (const FsEntry& e : extracted.fs.tree.entries()) {
    if (e.kind != FsEntryKind::File) continue;
    const Bytes* a = extracted.fs.contents.get(e.content_digest);
    const Bytes* b = loaded->fs.contents.get(e.content_digest);
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(*a == *b);
  }

  CHECK(!load_materialized_tree(tmp / "absent").has_value());
}
