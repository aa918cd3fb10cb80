// SPDX-License-Identifier: Apache-2.0
#include "firmscan/signatures.hpp"

#include "firmscan/errors.hpp"

namespace firmscan {

const char* to_string(SignatureKind k) {
  switch (k) {
    case SignatureKind::SquashFs:
      return "squashfs";
    case SignatureKind::Jffs2:
      return "jffs2";
    case SignatureKind::CramFs:
      return "cramfs";
    case SignatureKind::GzipStream:
      return "gzip";
    case SignatureKind::UBootLegacy:
      return "uboot-legacy";
    case SignatureKind::TrxHeader:
      return "trx";
  }
  return "?";
}

namespace {

const char* squashfs_compressor_name(std::uint16_t id) {
  switch (id) {
    case 1:
      return "gzip";
    case 2:
      return "lzma";
    case 3:
      return "lzo";
    case 4:
      return "xz";
    case 5:
      return "lz4";
    case 6:
      return "zstd";
    default:
      return "unknown";
  }
}

std::string squashfs_detail(ByteView image, std::size_t off, Endianness e) {
  // s_major/s_minor live at +28/+30 in both the v3 and v4 superblock.
  if (off + 32 > image.size()) return {};
  auto rd16 = [&](std::size_t o) {
    return e == Endianness::Little ? read_le16(image, o) : read_be16(image, o);
  };
  std::uint16_t major = rd16(off + 28);
  std::uint16_t minor = rd16(off + 30);
  std::string d = "v" + std::to_string(major) + "." + std::to_string(minor);
  if (major == 4) {
    d += ", compressor ";
    d += squashfs_compressor_name(rd16(off + 20));
  }
  return d;
}

std::string printable_prefix(ByteView image, std::size_t off, std::size_t max_len) {
  std::string s;
  for (std::size_t i = 0; i < max_len && off + i < image.size(); ++i) {
    std::uint8_t c = image[off + i];
    if (c == 0 || !is_printable_ascii(c)) break;
    s.push_back(static_cast<char>(c));
  }
  return s;
}

}  // namespace

std::vector<SignatureHit> scan_signatures(ByteView image) {
  std::vector<SignatureHit> hits;
  const std::size_t n = image.size();
  for (std::size_t i = 0; i < n; ++i) {
    switch (image[i]) {
      case 0x68:  // "hsqs"
        if (i + 4 <= n && image[i + 1] == 0x73 && image[i + 2] == 0x71 && image[i + 3] == 0x73) {
          hits.push_back({SignatureKind::SquashFs, i, Endianness::Little,
                          squashfs_detail(image, i, Endianness::Little)});
        }
        break;
      case 0x73:  // "sqsh"
        if (i + 4 <= n && image[i + 1] == 0x71 && image[i + 2] == 0x73 && image[i + 3] == 0x68) {
          hits.push_back({SignatureKind::SquashFs, i, Endianness::Big,
                          squashfs_detail(image, i, Endianness::Big)});
        }
        break;
      case 0x85:  // JFFS2 little-endian u16 0x1985, nodes are 4-byte aligned
        if (i % 4 == 0 && i + 2 <= n && image[i + 1] == 0x19) {
          hits.push_back({SignatureKind::Jffs2, i, Endianness::Little, {}});
        }
        break;
      case 0x45:  // CramFS little-endian u32 0x28cd3d45
        if (i + 4 <= n && image[i + 1] == 0x3d && image[i + 2] == 0xcd && image[i + 3] == 0x28) {
          hits.push_back({SignatureKind::CramFs, i, Endianness::Little, {}});
        }
        break;
      case 0x1f:  // gzip
        if (i + 2 <= n && image[i + 1] == 0x8b) {
          std::string detail;
          if (i + 3 <= n && image[i + 2] == 8) detail = "deflate";
          hits.push_back({SignatureKind::GzipStream, i, Endianness::Little, std::move(detail)});
        }
        break;
      case 0x27:  // U-Boot legacy image magic, big-endian on wire
        if (i + 4 <= n && image[i + 1] == 0x05 && image[i + 2] == 0x19 && image[i + 3] == 0x56) {
          std::string name = printable_prefix(image, i + 32, 32);
          hits.push_back({SignatureKind::UBootLegacy, i, Endianness::Big,
                          name.empty() ? std::string() : "name \"" + name + "\""});
        }
        break;
      case 0x48:  // TRX "HDR0"
        if (i + 4 <= n && image[i + 1] == 0x44 && image[i + 2] == 0x52 && image[i + 3] == 0x30) {
          std::string detail;
          if (i + 8 <= n) detail = "len " + std::to_string(read_le32(image, i + 4));
          hits.push_back({SignatureKind::TrxHeader, i, Endianness::Little, std::move(detail)});
        }
        break;
      default:
        break;
    }
  }
  return hits;
}

Bytes carve_region(ByteView image, std::uint64_t start, std::uint64_t end) {
  if (start > end || end > image.size()) {
    throw RangeError("carve_region: bounds [" + std::to_string(start) + ", " +
                     std::to_string(end) + ") outside image of " + std::to_string(image.size()) +
                     " bytes");
  }
  return Bytes(image.begin() + static_cast<std::ptrdiff_t>(start),
               image.begin() + static_cast<std::ptrdiff_t>(end));
}

Bytes carve_region(ByteView image, std::uint64_t start) {
  return carve_region(image, start, image.size());
}

}  // namespace firmscan
