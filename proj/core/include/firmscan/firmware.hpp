// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "firmscan/bytes.hpp"

namespace firmscan {

/// A raw firmware image as handed to the pipeline: opaque label, the bytes,
/// and their SHA-256. The digest doubles as the cache key.
struct RawFirmware {
  std::string source_id;
  Bytes bytes;
  std::string digest;

  std::size_t size() const { return bytes.size(); }
  ByteView view() const { return ByteView(bytes); }

  static RawFirmware from_bytes(std::string source_id, Bytes bytes);
  static RawFirmware from_file(const std::filesystem::path& path);  // IoError
};

}  // namespace firmscan
