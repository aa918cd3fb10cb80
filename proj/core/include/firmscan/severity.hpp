// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

#include "firmscan/nvd.hpp"

namespace firmscan {

enum class SeverityBucket { None = 0, Low, Medium, High, Critical };

const char* to_string(SeverityBucket b);
std::optional<SeverityBucket> severity_from(std::string_view s);

enum class CvssVersion { None, V2, V31 };

struct SeverityAssessment {
  SeverityBucket bucket = SeverityBucket::None;
  std::optional<double> score;
  CvssVersion version = CvssVersion::None;
};

/// CVSS v3.1 band for a base score: 0.0 None, 0.1-3.9 Low, 4.0-6.9
/// Medium, 7.0-8.9 High, 9.0-10.0 Critical.
SeverityBucket severity_band_v31(double score);

/// CVSS v2 mapping: 0.0-3.9 Low, 4.0-6.9 Medium, 7.0-10.0 High. v2 never
/// yields Critical.
SeverityBucket severity_band_v2(double score);

/// Prefers the v3.1 score, falls back to v2, else bucket None.
SeverityAssessment cvss_severity(const CveRecord& record);

}  // namespace firmscan
