// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace firmscan::cli {

enum class ClassifierMode { Rule, RuleThenLlm };

/// Effective run configuration after layering: flags > environment
/// (FIRMSCAN_*) > config file (flat key=value) > defaults.
struct RunConfig {
  std::vector<std::string> nvd_feed_paths;
  std::string index_path;
  std::string cache_dir;
  std::string out_dir = ".";
  ClassifierMode classifier_mode = ClassifierMode::Rule;
  std::optional<std::string> llm_endpoint;
  std::string classifier_api_key;  // FIRMSCAN_CLASSIFIER_API_KEY
  std::string nvd_api_key;         // FIRMSCAN_NVD_API_KEY
  bool offline = true;
  bool reproducible = false;
  unsigned parallelism = 0;  // 0 = hardware concurrency
  bool to_stdout = false;
  std::string rule_table_path;        // empty = builtin
  std::string known_components_path;  // empty = builtin

  unsigned effective_jobs() const;

  /// Throws ConfigError on contradictions (rule-then-llm without an
  /// endpoint + credential, jobs == 0 explicitly, ...).
  void validate() const;
};

/// Reads a flat key=value file ('#' comments, blank lines ignored).
/// Unknown keys are rejected so typos do not silently disappear.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// FIRMSCAN_* environment overrides.
void apply_env(RunConfig& cfg);

}  // namespace firmscan::cli
