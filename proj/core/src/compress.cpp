// SPDX-License-Identifier: Apache-2.0
#include "firmscan/compress.hpp"

#include <zlib.h>

#include <limits>

#include "firmscan/errors.hpp"

namespace firmscan {

namespace {

Bytes inflate_impl(ByteView in, std::size_t max_out, int window_bits, const char* what) {
  z_stream zs{};
  if (inflateInit2(&zs, window_bits) != Z_OK) {
    throw TruncatedImage(std::string(what) + ": inflateInit failed");
  }
  Bytes out;
  Bytes buf(64 * 1024);
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf.data();
    zs.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw TruncatedImage(std::string(what) + ": corrupt deflate stream (zlib rc " +
                           std::to_string(rc) + ")");
    }
    out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
    if (out.size() > max_out) {
      inflateEnd(&zs);
      throw ResourceLimitExceeded(std::string(what) + ": inflated size exceeds limit of " +
                                  std::to_string(max_out) + " bytes");
    }
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw TruncatedImage(std::string(what) + ": truncated deflate stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace

Bytes zlib_inflate(ByteView in, std::size_t max_out) {
  return inflate_impl(in, max_out, 15, "zlib");
}

Bytes gzip_inflate(ByteView in, std::size_t max_out) {
  return inflate_impl(in, max_out, 15 + 16, "gzip");
}

Bytes zlib_deflate(ByteView in, int level) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  Bytes out(bound);
  if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), level) != Z_OK) {
    throw Error("zlib: deflate failed");
  }
  out.resize(bound);
  return out;
}

}  // namespace firmscan
