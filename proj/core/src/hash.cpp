// SPDX-License-Identifier: Apache-2.0
#include "firmscan/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace firmscan {

std::string sha256_hex(ByteView data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("sha256: digest computation failed");
  }
  return to_hex(ByteView(digest, len));
}

std::string sha256_hex(std::string_view data) {
  return sha256_hex(view_of(data));
}

}  // namespace firmscan
