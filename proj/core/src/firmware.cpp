// SPDX-License-Identifier: Apache-2.0
#include "firmscan/firmware.hpp"

#include <fstream>

#include "firmscan/errors.hpp"
#include "firmscan/hash.hpp"

namespace firmscan {

RawFirmware RawFirmware::from_bytes(std::string source_id, Bytes bytes) {
  RawFirmware fw;
  fw.source_id = std::move(source_id);
  fw.bytes = std::move(bytes);
  fw.digest = sha256_hex(ByteView(fw.bytes));
  return fw;
}

RawFirmware RawFirmware::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open firmware image: " + path.string());
  }
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read error on firmware image: " + path.string());
  }
  return from_bytes(path.filename().string(), std::move(data));
}

}  // namespace firmscan
