// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "firmscan/cpe.hpp"

namespace firmscan {

/// CWE link kept verbatim ("CWE-476"); NVD's "NVD-CWE-noinfo" maps to
/// this sentinel, matching the label used in reports.
inline constexpr const char* kCweNoInfo = "CWE-noinfo";

struct CvssScore {
  double score = 0.0;
  std::string vector_string;

  bool operator==(const CvssScore&) const = default;
};

struct VersionBound {
  std::string value;
  bool inclusive = false;

  bool operator==(const VersionBound&) const = default;
};

/// One flattened NVD applicability entry: either an exact version in
/// `base`, or a half/fully-open range. When base.version is a literal,
/// start/end are absent.
struct CpeMatchRange {
  Cpe23 base;
  std::optional<VersionBound> start;
  std::optional<VersionBound> end;

  bool operator==(const CpeMatchRange&) const = default;
};

struct CveRecord {
  std::string id;
  std::string description;
  std::vector<std::string> cwe_ids;
  std::optional<CvssScore> cvss31;
  std::optional<CvssScore> cvss2;
  std::vector<CpeMatchRange> configurations;

  bool operator==(const CveRecord&) const = default;
};

struct FeedMeta {
  std::string source_label;
  std::size_t record_count = 0;
  std::size_t duplicate_count = 0;
  std::string ingested_at;  // ISO-8601

  bool operator==(const FeedMeta&) const = default;
};

/// Immutable post-ingestion index: CVE records plus a (vendor, product)
/// lookup covering every configuration of every record.
class VulnIndex {
 public:
  VulnIndex() = default;

  const std::map<std::string, CveRecord>& records() const { return records_; }
  const FeedMeta& meta() const { return meta_; }

  const CveRecord* find(std::string_view cve_id) const;

  /// CVE ids with at least one configuration for (vendor, product),
  /// case-insensitive, sorted ascending.
  const std::vector<std::string>* product_lookup(std::string_view vendor,
                                                 std::string_view product) const;

  bool operator==(const VulnIndex& other) const {
    return records_ == other.records_ && meta_ == other.meta_;
  }

  static VulnIndex from_records(std::vector<CveRecord> records, FeedMeta meta);

 private:
  std::map<std::string, CveRecord> records_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> product_index_;
  FeedMeta meta_;
};

struct IngestOptions {
  std::string source_label = "nvd-feed";
  /// Timestamp recorded in feed_meta; defaults to now. Fixed by
  /// reproducible runs.
  std::optional<std::string> timestamp_override;
};

/// Parses NVD API 2.0 response documents (the `vulnerabilities[].cve`
/// subset) into an index. Last occurrence wins on duplicate ids;
/// duplicates are counted. Throws FeedParseError with the document index
/// and CVE position on malformed input.
VulnIndex ingest_nvd_feed(const std::vector<std::string>& documents,
                          const IngestOptions& opts = {});

/// Single-file JSON container with a format_version header (1).
void save_index(const VulnIndex& index, const std::filesystem::path& path);
VulnIndex load_index(const std::filesystem::path& path);

}  // namespace firmscan
