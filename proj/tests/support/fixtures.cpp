// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

#include <fstream>
#include <random>
#include <stdexcept>

#ifndef FIRMSCAN_FIXTURE_DIR
#error "FIRMSCAN_FIXTURE_DIR must be defined by the build"
#endif

namespace fstest {

using firmscan::Bytes;
using firmscan::ByteView;

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fixture: cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, ByteView data) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("fixture: cannot write " + path.string());
}

std::string fig1_feed_text() {
  return read_file_text(std::filesystem::path(FIRMSCAN_FIXTURE_DIR) / "nvd_fig1.json");
}

std::string extra_feed_text() {
  return read_file_text(std::filesystem::path(FIRMSCAN_FIXTURE_DIR) / "nvd_extra.json");
}

firmscan::VulnIndex fig1_index() {
  firmscan::IngestOptions opts;
  opts.source_label = "fig1";
  opts.timestamp_override = "1970-01-01T00:00:00Z";
  return firmscan::ingest_nvd_feed({fig1_feed_text()}, opts);
}

firmscan::VulnIndex combined_index() {
  firmscan::IngestOptions opts;
  opts.source_label = "fig1+extra";
  opts.timestamp_override = "1970-01-01T00:00:00Z";
  return firmscan::ingest_nvd_feed({fig1_feed_text(), extra_feed_text()}, opts);
}

namespace {

Bytes binary_with_strings(std::size_t junk, std::uint32_t seed,
                          const std::vector<std::string>& strings) {
  std::mt19937 rng(seed);
  Bytes out;
  out.reserve(junk + 256);
  // something ELF-shaped up front so the file is not pure text
  const char elf[] = "\x7f" "ELF";
  out.insert(out.end(), elf, elf + 4);
  for (std::size_t i = 0; i < junk; ++i) out.push_back(static_cast<std::uint8_t>(rng()));
  for (const std::string& s : strings) {
    out.push_back(0);
    out.insert(out.end(), s.begin(), s.end());
    out.push_back(0);
  }
  return out;
}

}  // namespace

std::vector<PackEntry> rootfs_busybox_openssl() {
  const std::string opkg_status =
      "Package: busybox\n"
      "Version: 1.33.2-1\n"
      "Depends: libc\n"
      "Status: install user installed\n"
      "Architecture: mips_24kc\n"
      "Installed-Time: 1624000000\n"
      "\n"
      "Package: dropbear\n"
      "Version: 2019.78-2\n"
      "Status: install user installed\n"
      "Architecture: mips_24kc\n";

  std::vector<PackEntry> entries;
  entries.push_back({"bin", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"bin/busybox", PackEntry::Kind::File,
                     binary_with_strings(2048, 1,
                                         {"BusyBox v1.33.2 (2021-06-30 12:34:56 UTC) multi-call "
                                          "binary.",
                                          "Usage: busybox [function [arguments]...]"}),
                     {}, 0755});
  entries.push_back({"bin/sh", PackEntry::Kind::Symlink, {}, "busybox", 0777});
  entries.push_back({"etc", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"etc/os-release", PackEntry::Kind::File,
                     firmscan::bytes_of("NAME=\"Fixture Router OS\"\nVERSION_ID=\"21.02\"\n"),
                     {}, 0644});
  entries.push_back({"lib", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"lib/libcrypto.so.0.9.3", PackEntry::Kind::File,
                     binary_with_strings(4096, 2, {"OpenSSL 0.9.3 25 May 1999"}), {}, 0644});
  entries.push_back({"usr", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"usr/lib", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"usr/lib/opkg", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"usr/lib/opkg/status", PackEntry::Kind::File,
                     firmscan::bytes_of(opkg_status), {}, 0644});
  entries.push_back({"usr/sbin", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"usr/sbin/dropbear", PackEntry::Kind::File,
                     binary_with_strings(1024, 3, {"Dropbear SSH multi-purpose v2019.78"}), {},
                     0755});
  return entries;
}

std::vector<PackEntry> rootfs_dnsmasq_zlib() {
  std::vector<PackEntry> entries;
  entries.push_back({"bin", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"bin/busybox", PackEntry::Kind::File,
                     binary_with_strings(1500, 4,
                                         {"BusyBox v1.22.1 (2014-02-14 10:11:12 UTC) multi-call "
                                          "binary."}),
                     {}, 0755});
  entries.push_back({"usr", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"usr/sbin", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"usr/sbin/dnsmasq", PackEntry::Kind::File,
                     binary_with_strings(3000, 5, {"dnsmasq-2.62", "started, version %s cachesize %d"}),
                     {}, 0755});
  entries.push_back({"lib", PackEntry::Kind::Dir, {}, {}, 0755});
  entries.push_back({"lib/libz.so.1.2.7", PackEntry::Kind::File,
                     binary_with_strings(2000, 6,
                                         {"deflate 1.2.7 Copyright 1995-2012 Jean-loup Gailly"}),
                     {}, 0644});
  return entries;
}

firmscan::Bytes firmware_plain(const std::vector<PackEntry>& entries) {
  return pack_squashfs(entries);
}

firmscan::Bytes firmware_with_uboot_header(const std::vector<PackEntry>& entries,
                                           std::size_t fs_offset) {
  Bytes image;
  // U-Boot legacy header: big-endian magic, then checksum/size fields the
  // scanner does not inspect, then the 32-byte image name.
  image.push_back(0x27);
  image.push_back(0x05);
  image.push_back(0x19);
  image.push_back(0x56);
  while (image.size() < 32) image.push_back(0);
  const std::string name = "Fixture Router 1.0";
  image.insert(image.end(), name.begin(), name.end());
  while (image.size() < 64) image.push_back(0);

  // flash padding up to the filesystem partition
  while (image.size() < fs_offset) image.push_back(0xff);

  Bytes fs = pack_squashfs(entries);
  image.insert(image.end(), fs.begin(), fs.end());
  return image;
}

std::vector<std::string> write_fixture_corpus(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "router-a.bin", ByteView(firmware_plain(rootfs_busybox_openssl())));
  write_file(dir / "router-b.bin",
             ByteView(firmware_with_uboot_header(rootfs_dnsmasq_zlib(), 0x20000)));

  std::mt19937 rng(99);
  Bytes junk(8192);
  for (auto& b : junk) {
    b = static_cast<std::uint8_t>(rng());
    // strip accidental magic prefixes so the file stays unextractable
    if (b == 0x68 || b == 0x73 || b == 0x1f || b == 0x85 || b == 0x45 || b == 0x27 || b == 0x48) {
      b = 0x00;
    }
  }
  write_file(dir / "router-corrupt.bin", ByteView(junk));
  return {"router-a.bin", "router-b.bin", "router-corrupt.bin"};
}

void materialize_entries(const std::vector<PackEntry>& entries,
                         const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  for (const PackEntry& e : entries) {
    fs::path target = root / fs::path(e.path);
    switch (e.kind) {
      case PackEntry::Kind::Dir:
        fs::create_directories(target);
        break;
      case PackEntry::Kind::File: {
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(e.content.data()),
                  static_cast<std::streamsize>(e.content.size()));
        break;
      }
      case PackEntry::Kind::Symlink:
        fs::create_directories(target.parent_path());
        fs::create_symlink(e.target, target);
        break;
    }
  }
}

}  // namespace fstest
