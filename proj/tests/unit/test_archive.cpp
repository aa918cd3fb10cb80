// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>

#include "firmscan/archive.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/squashfs.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "squashfs_writer.hpp"
#include "tar_writer.hpp"
#include "temp_dir.hpp"

using namespace firmscan;
using fstest::PackEntry;

TEST_CASE("empty directory loads as an empty tree") {
  fstest::TempDir tmp;
  ExtractedFs fs = load_tree_from_archive(tmp.path());
  CHECK(fs.tree.entries().empty());
}

TEST_CASE("tar with a/b.txt yields dir + file entries") {
  fstest::TarWriter tw;
  tw.add_file("a/b.txt", view_of("hello"), 0644);
  Bytes tar = tw.finish();

  ExtractedFs fs = load_tree_from_tar(ByteView(tar));
  REQUIRE(fs.tree.entries().size() == 2);
  CHECK(fs.tree.entries()[0].path == "a");
  CHECK(fs.tree.entries()[0].kind == FsEntryKind::Dir);  // synthesized parent
  CHECK(fs.tree.entries()[1].path == "a/b.txt");
  CHECK(fs.tree.entries()[1].kind == FsEntryKind::File);
  CHECK(fs.tree.entries()[1].size == 5);
}

TEST_CASE("directory walk and tar agree with the squashfs extraction") {
  auto entries = fstest::rootfs_busybox_openssl();

  fstest::TempDir tmp;
  fstest::materialize_entries(entries, tmp.path());
  ExtractedFs from_dir = load_tree_from_archive(tmp.path());

  fstest::TarWriter tw;
  for (const PackEntry& e : entries) {
    switch (e.kind) {
      case PackEntry::Kind::Dir:
        tw.add_dir(e.path, e.mode);
        break;
      case PackEntry::Kind::File:
        tw.add_file(e.path, ByteView(e.content), e.mode);
        break;
      case PackEntry::Kind::Symlink:
        tw.add_symlink(e.path, e.target);
        break;
    }
  }
  Bytes tar = tw.finish();
  ExtractedFs from_tar = load_tree_from_tar(ByteView(tar));

  ExtractedFs from_squash = extract_squashfs(ByteView(fstest::pack_squashfs(entries)));

  // tar stores mode 0777 for symlinks and the squashfs fixture may use
  // another; compare (path, kind, digest, target) rather than full
  // entries.
  auto project = [](const FilesystemTree& t) {
    std::vector<std::tuple<std::string, FsEntryKind, std::string, std::string>> out;
    for (const FsEntry& e : t.entries()) {
      out.emplace_back(e.path, e.kind, e.content_digest, e.link_target);
    }
    return out;
  };
  CHECK(project(from_dir.tree) == project(from_tar.tree));
  CHECK(project(from_dir.tree) == project(from_squash.tree));
}

TEST_CASE("tar entries escaping the root are rejected") {
  fstest::TarWriter tw;
  tw.add_file("../evil", view_of("x"), 0644);
  Bytes tar = tw.finish();
  CHECK_THROWS_AS(load_tree_from_tar(ByteView(tar)), UnsupportedArchive);
}

TEST_CASE("non-archives are rejected") {
  fstest::TempDir tmp;
  auto p = tmp / "noise.bin";
  Bytes noise(2048, 0x5a);
  fstest::write_file(p, ByteView(noise));
  CHECK_THROWS_AS(load_tree_from_archive(p), UnsupportedArchive);
  CHECK_THROWS_AS(load_tree_from_archive(tmp / "missing"), IoError);
}

TEST_CASE("gnu long names are honored") {
  std::string long_dir(60, 'd');
  std::string long_path = long_dir + "/" + std::string(70, 'f') + ".txt";
  fstest::TarWriter tw;
  Bytes name_block(long_path.begin(), long_path.end());
  tw.add_file("././@LongLink", ByteView(name_block), 0644);
  tw.add_file("short", view_of("content"), 0644);
  Bytes tar = tw.finish();
  tar[156] = 'L';  // turn the first record into a GNU long-name block

  ExtractedFs fs = load_tree_from_tar(ByteView(tar));
  REQUIRE(fs.tree.entries().size() == 2);
  CHECK(fs.tree.entries()[0].path == long_dir);
  CHECK(fs.tree.entries()[1].path == long_path);
  CHECK(fs.tree.entries()[1].size == 7);
}
