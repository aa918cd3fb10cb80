// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "firmscan/bytes.hpp"
#include "firmscan/nvd.hpp"
#include "squashfs_writer.hpp"

namespace fstest {

std::string read_file_text(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, firmscan::ByteView data);

/// Parsed committed fixture feeds (tests/fixtures/*.json, dir from the
/// FIRMSCAN_FIXTURE_DIR compile definition).
std::string fig1_feed_text();
std::string extra_feed_text();
firmscan::VulnIndex fig1_index();
firmscan::VulnIndex combined_index();

/// Root filesystem with busybox 1.33.2 (opkg status + version string) and
/// openssl 0.9.3 (shared-library name + version string).
std::vector<PackEntry> rootfs_busybox_openssl();

/// Root filesystem with busybox 1.22.1, dnsmasq 2.62 and zlib 1.2.7.
std::vector<PackEntry> rootfs_dnsmasq_zlib();

/// SquashFS image starting at offset 0.
firmscan::Bytes firmware_plain(const std::vector<PackEntry>& entries);

/// 64-byte U-Boot legacy header, zero padding, SquashFS at `fs_offset`.
firmscan::Bytes firmware_with_uboot_header(const std::vector<PackEntry>& entries,
                                           std::size_t fs_offset = 0x40000);

/// Writes the three-image corpus used by CLI tests: two valid images and
/// one corrupt file. Returns the three file names.
std::vector<std::string> write_fixture_corpus(const std::filesystem::path& dir);

/// Materializes pack entries as real files under `root` so directory
/// walks can serve as the extraction-fidelity oracle.
void materialize_entries(const std::vector<PackEntry>& entries, const std::filesystem::path& root);

}  // namespace fstest
