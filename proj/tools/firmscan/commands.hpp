// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "app_config.hpp"

namespace firmscan::cli {

// Exit-code contract: 0 ok, 2 parse, 3 io, 4 nothing-extracted/all-failed,
// 5 config.
enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kIoError = 3,
  kExtractionError = 4,
  kConfigError = 5,
};

int cmd_feed_ingest(const RunConfig& cfg);
int cmd_feed_fetch(const RunConfig& cfg, const std::string& cpe_query, int max_pages);
int cmd_scan(const RunConfig& cfg, const std::string& image_path);
int cmd_analyze(const RunConfig& cfg, const std::string& input_path);
int cmd_corpus(const RunConfig& cfg, const std::string& input_dir);
int cmd_impact(const RunConfig& cfg, const std::string& occurrences_csv);

}  // namespace firmscan::cli
