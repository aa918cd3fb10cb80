// SPDX-License-Identifier: Apache-2.0
#include "tar_writer.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace fstest {

void TarWriter::header(const std::string& path, unsigned mode, std::uint64_t size, char typeflag,
                       const std::string& linkname) {
  if (path.size() > 100 || linkname.size() > 100) {
    throw std::invalid_argument("tar fixture writer: name longer than 100 bytes");
  }
  char hdr[512];
  std::memset(hdr, 0, sizeof hdr);
  std::memcpy(hdr, path.data(), path.size());
  std::snprintf(hdr + 100, 8, "%07o", mode & 07777);
  std::snprintf(hdr + 108, 8, "%07o", 0);
  std::snprintf(hdr + 116, 8, "%07o", 0);
  std::snprintf(hdr + 124, 12, "%011llo", static_cast<unsigned long long>(size));
  std::snprintf(hdr + 136, 12, "%011o", 0);
  std::memset(hdr + 148, ' ', 8);  // checksum computed over spaces
  hdr[156] = typeflag;
  std::memcpy(hdr + 157, linkname.data(), linkname.size());
  std::memcpy(hdr + 257, "ustar", 5);
  hdr[262] = '\0';
  hdr[263] = '0';
  hdr[264] = '0';

  unsigned sum = 0;
  for (unsigned char c : hdr) sum += c;
  std::snprintf(hdr + 148, 8, "%06o", sum);
  hdr[154] = '\0';
  hdr[155] = ' ';

  out_.insert(out_.end(), hdr, hdr + 512);
}

void TarWriter::add_file(const std::string& path, firmscan::ByteView content, unsigned mode) {
  header(path, mode, content.size(), '0', {});
  out_.insert(out_.end(), content.begin(), content.end());
  while (out_.size() % 512 != 0) out_.push_back(0);
}

void TarWriter::add_dir(const std::string& path, unsigned mode) {
  header(path.back() == '/' ? path : path + "/", mode, 0, '5', {});
}

void TarWriter::add_symlink(const std::string& path, const std::string& target) {
  header(path, 0777, 0, '2', target);
}

firmscan::Bytes TarWriter::finish() {
  out_.insert(out_.end(), 1024, 0);
  return std::move(out_);
}

}  // namespace fstest
