// SPDX-License-Identifier: Apache-2.0
#include "firmscan/severity.hpp"

namespace firmscan {

const char* to_string(SeverityBucket b) {
  switch (b) {
    case SeverityBucket::None:
      return "none";
    case SeverityBucket::Low:
      return "low";
    case SeverityBucket::Medium:
      return "medium";
    case SeverityBucket::High:
      return "high";
    case SeverityBucket::Critical:
      return "critical";
  }
  return "?";
}

std::optional<SeverityBucket> severity_from(std::string_view s) {
  if (s == "none") return SeverityBucket::None;
  if (s == "low") return SeverityBucket::Low;
  if (s == "medium") return SeverityBucket::Medium;
  if (s == "high") return SeverityBucket::High;
  if (s == "critical") return SeverityBucket::Critical;
  return std::nullopt;
}

SeverityBucket severity_band_v31(double score) {
  if (score <= 0.0) return SeverityBucket::None;
  if (score < 4.0) return SeverityBucket::Low;
  if (score < 7.0) return SeverityBucket::Medium;
  if (score < 9.0) return SeverityBucket::High;
  return SeverityBucket::Critical;
}

SeverityBucket severity_band_v2(double score) {
  if (score < 4.0) return SeverityBucket::Low;
  if (score < 7.0) return SeverityBucket::Medium;
  return SeverityBucket::High;
}

SeverityAssessment cvss_severity(const CveRecord& record) {
  if (record.cvss31) {
    return {severity_band_v31(record.cvss31->score), record.cvss31->score, CvssVersion::V31};
  }
  if (record.cvss2) {
    return {severity_band_v2(record.cvss2->score), record.cvss2->score, CvssVersion::V2};
  }
  return {};
}

}  // namespace firmscan
