// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "firmscan/nvd.hpp"

namespace firmscan {

/// Segmented, numeric-aware version order. Versions split on '.' and
/// '-'; two numeric segments compare numerically, otherwise
/// lexicographically, with numeric segments ordering before
/// alphanumeric ones; missing segments read as 0. Total order:
/// returns <0, 0, >0.
int compare_versions(std::string_view a, std::string_view b);

/// Does `version` satisfy one flattened applicability entry?
bool version_matches(std::string_view version, const CpeMatchRange& range);

/// CVE records whose configurations match the queried CPE: vendor and
/// product compare case-insensitively; the version must equal the
/// configuration's literal version or fall inside its range (both under
/// compare_versions). Sorted by CVE id. Throws UnresolvedVersion when the
/// query's vendor, product or version is not a literal.
std::vector<const CveRecord*> match_cpe(const VulnIndex& index, const Cpe23& cpe);

}  // namespace firmscan
