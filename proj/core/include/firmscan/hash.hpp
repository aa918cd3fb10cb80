// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "firmscan/bytes.hpp"

namespace firmscan {

/// SHA-256 of a byte buffer as 64 lowercase hex characters.
std::string sha256_hex(ByteView data);
std::string sha256_hex(std::string_view data);

}  // namespace firmscan
