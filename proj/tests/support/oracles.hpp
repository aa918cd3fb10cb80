// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "firmscan/nvd.hpp"

namespace fstest {

/// Independent version order used to cross-check the library matcher.
/// Deliberately written from the rule statement, not shared with the
/// implementation: split on '.'/'-', numeric vs lexical segments,
/// numeric-before-alpha, missing segments are zero.
int oracle_compare_versions(const std::string& a, const std::string& b);

/// Brute-force matcher: walks every record and every configuration with
/// its own comparison logic. The reference for match_cpe equivalence.
std::vector<std::string> oracle_match(const firmscan::VulnIndex& index,
                                      const std::string& vendor, const std::string& product,
                                      const std::string& version);

/// (path, kind, content-digest) triples from walking a directory on
/// disk; the fidelity oracle for extraction round-trips. kind is one of
/// "file", "dir", "symlink"; digest is empty for non-files and the
/// symlink target is appended for symlinks.
std::multiset<std::tuple<std::string, std::string, std::string>> walk_directory_multiset(
    const std::filesystem::path& root);

}  // namespace fstest
