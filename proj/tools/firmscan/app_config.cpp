// SPDX-License-Identifier: Apache-2.0
#include "app_config.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "firmscan/errors.hpp"

namespace firmscan::cli {

unsigned RunConfig::effective_jobs() const {
  if (parallelism > 0) return parallelism;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void RunConfig::validate() const {
  if (classifier_mode == ClassifierMode::RuleThenLlm) {
    if (!llm_endpoint || llm_endpoint->empty()) {
      throw ConfigError("classifier rule-then-llm needs an --llm-endpoint");
    }
    if (classifier_api_key.empty()) {
      throw ConfigError("classifier rule-then-llm needs FIRMSCAN_CLASSIFIER_API_KEY");
    }
  }
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: key " + key + " wants a boolean, got \"" + v + "\"");
}

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value,
              const std::string& origin) {
  if (key == "index") {
    cfg.index_path = value;
  } else if (key == "cache_dir") {
    cfg.cache_dir = value;
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "offline") {
    cfg.offline = parse_bool(value, key);
  } else if (key == "reproducible") {
    cfg.reproducible = parse_bool(value, key);
  } else if (key == "jobs") {
    int n = std::stoi(value);
    if (n < 1) throw ConfigError("config: jobs must be >= 1");
    cfg.parallelism = static_cast<unsigned>(n);
  } else if (key == "classifier") {
    if (value == "rule") {
      cfg.classifier_mode = ClassifierMode::Rule;
    } else if (value == "rule-then-llm") {
      cfg.classifier_mode = ClassifierMode::RuleThenLlm;
    } else {
      throw ConfigError("config: classifier must be rule or rule-then-llm");
    }
  } else if (key == "llm_endpoint") {
    cfg.llm_endpoint = value;
  } else if (key == "rule_table") {
    cfg.rule_table_path = value;
  } else if (key == "known_components") {
    cfg.known_components_path = value;
  } else {
    throw ConfigError("config: unknown key \"" + key + "\" in " + origin);
  }
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + " is not key=value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) value.erase(0, 1);
    apply_kv(cfg, key, value, path);
  }
}

void apply_env(RunConfig& cfg) {
  auto get = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("FIRMSCAN_INDEX")) cfg.index_path = *v;
  if (auto v = get("FIRMSCAN_CACHE_DIR")) cfg.cache_dir = *v;
  if (auto v = get("FIRMSCAN_OUT")) cfg.out_dir = *v;
  if (auto v = get("FIRMSCAN_OFFLINE")) cfg.offline = parse_bool(*v, "FIRMSCAN_OFFLINE");
  if (auto v = get("FIRMSCAN_REPRODUCIBLE"))
    cfg.reproducible = parse_bool(*v, "FIRMSCAN_REPRODUCIBLE");
  if (auto v = get("FIRMSCAN_JOBS")) apply_kv(cfg, "jobs", *v, "environment");
  if (auto v = get("FIRMSCAN_CLASSIFIER")) apply_kv(cfg, "classifier", *v, "environment");
  if (auto v = get("FIRMSCAN_LLM_ENDPOINT")) cfg.llm_endpoint = *v;
  if (auto v = get("FIRMSCAN_RULE_TABLE")) cfg.rule_table_path = *v;
  if (auto v = get("FIRMSCAN_KNOWN_COMPONENTS")) cfg.known_components_path = *v;
  if (auto v = get("FIRMSCAN_CLASSIFIER_API_KEY")) cfg.classifier_api_key = *v;
  if (auto v = get("FIRMSCAN_NVD_API_KEY")) cfg.nvd_api_key = *v;
}

}  // namespace firmscan::cli
