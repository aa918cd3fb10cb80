// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "firmscan/nvd.hpp"

namespace firmscan {

enum class MemoryClass { NotMemory = 0, Spatial, Temporal, OtherMemory };

/// Short names used in the rule-table file and CSV exports.
const char* to_string(MemoryClass c);
std::optional<MemoryClass> memory_class_from(std::string_view s);

/// Long labels of the classification prompt/response contract
/// ("spatial-memory-related", ...).
const char* memory_class_label(MemoryClass c);
std::optional<MemoryClass> memory_class_from_label(std::string_view s);

bool is_memory_related(MemoryClass c);

enum class ClassificationSource { RuleTable, Keyword, Llm, Default };
const char* to_string(ClassificationSource s);
std::optional<ClassificationSource> classification_source_from(std::string_view s);

enum class Confidence { High, Low };

struct ClassificationResult {
  MemoryClass mem_class = MemoryClass::NotMemory;
  ClassificationSource source = ClassificationSource::Default;
  std::string reasoning;
  Confidence confidence = Confidence::Low;
  /// The CWE that produced a rule-table hit, when source == RuleTable.
  std::optional<std::string> matched_cwe;
};

/// CWE id -> memory class, loaded from a versioned JSON file of the form
/// {"CWE-125": "spatial", ...}. Duplicate keys are rejected.
class RuleTable {
 public:
  static RuleTable builtin();
  static RuleTable from_json_text(std::string_view text);
  static RuleTable load_file(const std::filesystem::path& path);

  std::optional<MemoryClass> lookup(int cwe_number) const;
  const std::map<int, MemoryClass>& rules() const { return rules_; }

 private:
  std::map<int, MemoryClass> rules_;
};

/// Numeric part of a well-formed "CWE-<n>" id. Throws MalformedCweId.
int parse_cwe_number(std::string_view id);

/// Rule-table classification for one CWE. std::nullopt when the id is
/// well-formed but not in the table.
std::optional<ClassificationResult> classify_cwe(std::string_view cwe_id, const RuleTable& table);

/// Keyword fallback over the vulnerability description text, precedence
/// Temporal > Spatial > OtherMemory > NotMemory. Throws EmptyDescription.
ClassificationResult classify_description(std::string_view text);

class LlmClassifier;  // llm_client.hpp

struct ClassifierOptions {
  /// Flag multi-CWE records whose table hits disagree instead of taking
  /// the first hit.
  bool strict_cwe_conflicts = false;
  /// Fall back to the keyword path when the LLM fails; when false,
  /// LlmError propagates.
  bool llm_fallback = true;
};

/// CVE-level resolution: (1) first CWE with a rule-table hit; (2) LLM if
/// configured, else keyword heuristic over the description; (3) default
/// NotMemory when there is no signal at all. Deterministic whenever no
/// LLM client is configured.
class Classifier {
 public:
  explicit Classifier(RuleTable table, std::shared_ptr<LlmClassifier> llm = nullptr,
                      ClassifierOptions opts = {});
  ~Classifier();

  ClassificationResult classify_cve(const CveRecord& record) const;

  const RuleTable& table() const { return table_; }

  struct Stats {
    std::uint64_t rule_hits = 0;
    std::uint64_t description_consults = 0;
    std::uint64_t llm_calls = 0;
    std::uint64_t defaults = 0;
  };
  Stats stats() const;

 private:
  RuleTable table_;
  std::shared_ptr<LlmClassifier> llm_;
  ClassifierOptions opts_;
  mutable std::atomic<std::uint64_t> rule_hits_{0};
  mutable std::atomic<std::uint64_t> description_consults_{0};
  mutable std::atomic<std::uint64_t> llm_calls_{0};
  mutable std::atomic<std::uint64_t> defaults_{0};
};

}  // namespace firmscan
