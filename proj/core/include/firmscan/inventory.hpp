// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "firmscan/cpe.hpp"
#include "firmscan/fstree.hpp"

namespace firmscan {

enum class EvidenceSource { OpkgStatus, VersionString, SharedLibraryName, KnownPath };

const char* to_string(EvidenceSource s);

/// Why a component was identified: which strategy fired, where, and the
/// matched text (clipped to 120 chars).
struct Evidence {
  EvidenceSource source;
  std::string path;
  std::string excerpt;

  bool operator==(const Evidence&) const = default;
};

struct Component {
  Cpe23 cpe;
  std::string display_name;
  std::string version_raw;
  std::vector<Evidence> evidence;

  bool operator==(const Component&) const = default;
};

struct OpkgPackage {
  std::string name;
  std::string version;
  std::optional<std::string> architecture;

  bool operator==(const OpkgPackage&) const = default;
};

struct OpkgStatusResult {
  std::vector<OpkgPackage> packages;
  std::size_t skipped = 0;  // stanzas missing Package: or Version:
};

/// Parses an opkg/dpkg status file: blank-line-separated RFC-822-like
/// stanzas. Stanzas lacking Package: or Version: are skipped and counted.
OpkgStatusResult parse_opkg_status(std::string_view text);

/// Upstream version from a distribution version string: the revision
/// suffix is dropped at the first '-' that follows a digit
/// ("1.33.2-1" -> "1.33.2").
std::string normalize_version(std::string_view raw);

/// The pattern table driving path/content/package identification.
/// File format: JSON array of {pattern, vendor, product, version_group,
/// match}, where match is one of "path", "content", "package"
/// (default "path") and version_group indexes a capture group.
class KnownComponentsTable {
 public:
  static KnownComponentsTable builtin();
  static KnownComponentsTable from_json_text(std::string_view text);
  static KnownComponentsTable load_file(const std::filesystem::path& path);

  struct Rule {
    std::string pattern;
    std::string vendor;
    std::string product;
    int version_group = 0;  // 0 = no version captured
    enum class Match { Path, Content, Package } match = Match::Path;
  };

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

struct InventoryOptions {
  std::uint64_t max_content_scan_bytes = 16u << 20;  // per-file bound
  std::size_t min_string_run = 6;
};

/// Runs every identification strategy over the tree and merges the
/// results: one component per (vendor, product), evidence ordered by
/// precedence OpkgStatus > VersionString > SharedLibraryName > KnownPath,
/// components sorted by product then vendor.
std::vector<Component> identify_components(const FilesystemTree& tree,
                                           const ContentReader& reader,
                                           const KnownComponentsTable& table,
                                           const InventoryOptions& opts = {});

}  // namespace firmscan
