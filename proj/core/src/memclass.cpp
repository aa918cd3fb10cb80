// SPDX-License-Identifier: Apache-2.0
#include "firmscan/memclass.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>

#include "embedded/cwe_memory_rules.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/llm_client.hpp"

namespace firmscan {

const char* to_string(MemoryClass c) {
  switch (c) {
    case MemoryClass::NotMemory:
      return "not-memory";
    case MemoryClass::Spatial:
      return "spatial";
    case MemoryClass::Temporal:
      return "temporal";
    case MemoryClass::OtherMemory:
      return "other-memory";
  }
  return "?";
}

std::optional<MemoryClass> memory_class_from(std::string_view s) {
  if (s == "not-memory") return MemoryClass::NotMemory;
  if (s == "spatial") return MemoryClass::Spatial;
  if (s == "temporal") return MemoryClass::Temporal;
  if (s == "other-memory") return MemoryClass::OtherMemory;
  return std::nullopt;
}

const char* memory_class_label(MemoryClass c) {
  switch (c) {
    case MemoryClass::NotMemory:
      return "not-memory-related";
    case MemoryClass::Spatial:
      return "spatial-memory-related";
    case MemoryClass::Temporal:
      return "temporal-memory-related";
    case MemoryClass::OtherMemory:
      return "other-memory-related";
  }
  return "?";
}

std::optional<MemoryClass> memory_class_from_label(std::string_view s) {
  if (s == "not-memory-related") return MemoryClass::NotMemory;
  if (s == "spatial-memory-related") return MemoryClass::Spatial;
  if (s == "temporal-memory-related") return MemoryClass::Temporal;
  if (s == "other-memory-related") return MemoryClass::OtherMemory;
  return std::nullopt;
}

bool is_memory_related(MemoryClass c) {
  return c != MemoryClass::NotMemory;
}

const char* to_string(ClassificationSource s) {
  switch (s) {
    case ClassificationSource::RuleTable:
      return "rule-table";
    case ClassificationSource::Keyword:
      return "keyword";
    case ClassificationSource::Llm:
      return "llm";
    case ClassificationSource::Default:
      return "default";
  }
  return "?";
}

std::optional<ClassificationSource> classification_source_from(std::string_view s) {
  if (s == "rule-table") return ClassificationSource::RuleTable;
  if (s == "keyword") return ClassificationSource::Keyword;
  if (s == "llm") return ClassificationSource::Llm;
  if (s == "default") return ClassificationSource::Default;
  return std::nullopt;
}

// ---- rule table ---------------------------------------------------------

namespace {

/// SAX walker that rejects duplicate keys, which nlohmann's DOM parser
/// would silently collapse.
struct DuplicateKeyCheck : nlohmann::json::json_sax_t {
  std::vector<std::string> keys;
  bool duplicate = false;
  std::string dup_key;

  bool key(string_t& val) override {
    if (std::find(keys.begin(), keys.end(), val) != keys.end()) {
      duplicate = true;
      dup_key = val;
      return false;
    }
    keys.push_back(val);
    return true;
  }
  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t) override { return true; }
  bool number_unsigned(number_unsigned_t) override { return true; }
  bool number_float(number_float_t, const string_t&) override { return true; }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }
  bool start_object(std::size_t) override { return true; }
  bool end_object() override { return true; }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }
  bool parse_error(std::size_t, const std::string&, const nlohmann::json::exception&) override {
    return false;
  }
};

}  // namespace

int parse_cwe_number(std::string_view id) {
  if (id.size() < 5 || id.substr(0, 4) != "CWE-") {
    throw MalformedCweId("malformed CWE id: \"" + std::string(id) + "\"");
  }
  int n = 0;
  for (char c : id.substr(4)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw MalformedCweId("malformed CWE id: \"" + std::string(id) + "\"");
    }
    n = n * 10 + (c - '0');
    if (n > 1'000'000) throw MalformedCweId("CWE number out of range: \"" + std::string(id) + "\"");
  }
  return n;
}

RuleTable RuleTable::from_json_text(std::string_view text) {
  DuplicateKeyCheck check;
  if (!nlohmann::json::sax_parse(text, &check) && check.duplicate) {
    throw ConfigError("rule table: CWE id \"" + check.dup_key + "\" appears more than once");
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("rule table: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("rule table: expected a JSON object");

  RuleTable t;
  for (const auto& [key, value] : doc.items()) {
    int num = parse_cwe_number(key);
    auto cls = memory_class_from(value.get<std::string>());
    if (!cls) {
      throw ConfigError("rule table: unknown class \"" + value.get<std::string>() + "\" for " +
                        key);
    }
    t.rules_[num] = *cls;
  }
  return t;
}

RuleTable RuleTable::builtin() {
  return from_json_text(embedded::kCweMemoryRulesJson);
}

RuleTable RuleTable::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rule table: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::optional<MemoryClass> RuleTable::lookup(int cwe_number) const {
  auto it = rules_.find(cwe_number);
  return it == rules_.end() ? std::nullopt : std::make_optional(it->second);
}

std::optional<ClassificationResult> classify_cwe(std::string_view cwe_id, const RuleTable& table) {
  int num = parse_cwe_number(cwe_id);
  auto cls = table.lookup(num);
  if (!cls) return std::nullopt;
  ClassificationResult r;
  r.mem_class = *cls;
  r.source = ClassificationSource::RuleTable;
  r.confidence = Confidence::High;
  r.matched_cwe = "CWE-" + std::to_string(num);
  r.reasoning = *r.matched_cwe + " is mapped to " + memory_class_label(*cls) +
                " by the rule table";
  return r;
}

// ---- keyword fallback -----------------------------------------------------

namespace {

struct TriggerSet {
  MemoryClass cls;
  std::vector<std::string_view> triggers;
};

const std::array<TriggerSet, 3>& trigger_sets() {
  static const std::array<TriggerSet, 3> sets = {{
      {MemoryClass::Temporal, {"use after free", "use-after-free", "double free", "dangling"}},
      {MemoryClass::Spatial,
       {"out-of-bounds", "buffer overflow", "buffer over-read", "stack overflow", "heap overflow",
        "bounds"}},
      {MemoryClass::OtherMemory,
       {"null pointer dereference", "memory leak", "uninitialized memory", "memory corruption"}},
  }};
  return sets;
}

}  // namespace

ClassificationResult classify_description(std::string_view text) {
  if (text.empty()) throw EmptyDescription("classify_description: empty description");

  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  for (const TriggerSet& set : trigger_sets()) {
    for (std::string_view trigger : set.triggers) {
      if (lower.find(trigger) != std::string::npos) {
        ClassificationResult r;
        r.mem_class = set.cls;
        r.source = ClassificationSource::Keyword;
        r.confidence = Confidence::High;
        r.reasoning = std::string("description matched ") + memory_class_label(set.cls) +
                      " trigger \"" + std::string(trigger) + "\"";
        return r;
      }
    }
  }

  ClassificationResult r;
  r.mem_class = MemoryClass::NotMemory;
  r.source = ClassificationSource::Keyword;
  r.confidence = Confidence::Low;
  r.reasoning = "no memory-related trigger matched the description";
  return r;
}

// ---- CVE-level resolution ---------------------------------------------------

Classifier::Classifier(RuleTable table, std::shared_ptr<LlmClassifier> llm, ClassifierOptions opts)
    : table_(std::move(table)), llm_(std::move(llm)), opts_(opts) {}

Classifier::~Classifier() = default;

ClassificationResult Classifier::classify_cve(const CveRecord& record) const {
  // (1) rule table over the linked CWEs, in feed order
  std::optional<ClassificationResult> first_hit;
  for (const std::string& id : record.cwe_ids) {
    if (id.substr(0, 4) != "CWE-" || id == kCweNoInfo) continue;
    std::optional<ClassificationResult> hit;
    try {
      hit = classify_cwe(id, table_);
    } catch (const MalformedCweId&) {
      continue;  // sentinel or junk id: not a table candidate
    }
    if (!hit) continue;
    if (!first_hit) {
      first_hit = hit;
      if (!opts_.strict_cwe_conflicts) break;
    } else if (opts_.strict_cwe_conflicts && hit->mem_class != first_hit->mem_class) {
      throw RuleConflict(record.id + ": CWEs " + *first_hit->matched_cwe + " and " +
                         *hit->matched_cwe + " map to different memory classes");
    }
  }
  if (first_hit) {
    ++rule_hits_;
    return *first_hit;
  }

  // (2) LLM when configured, else the keyword heuristic
  if (!record.description.empty()) {
    if (llm_) {
      ++llm_calls_;
      try {
        return llm_->classify(record.description);
      } catch (const LlmError&) {
        if (!opts_.llm_fallback) throw;
      }
    }
    ++description_consults_;
    return classify_description(record.description);
  }

  // (3) nothing to go on
  ++defaults_;
  ClassificationResult r;
  r.mem_class = MemoryClass::NotMemory;
  r.source = ClassificationSource::Default;
  r.confidence = Confidence::Low;
  r.reasoning = "no CWE link and no description";
  return r;
}

Classifier::Stats Classifier::stats() const {
  return {rule_hits_.load(), description_consults_.load(), llm_calls_.load(), defaults_.load()};
}

}  // namespace firmscan
