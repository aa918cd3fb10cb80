// SPDX-License-Identifier: Apache-2.0
#include "firmscan/nvd.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>

#include "firmscan/errors.hpp"

namespace firmscan {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::regex kCveIdRe(R"(CVE-\d{4}-\d{4,})");

std::string utc_now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string position_label(std::size_t doc_idx, std::size_t vuln_idx) {
  return "document " + std::to_string(doc_idx) + ", vulnerability " + std::to_string(vuln_idx);
}

std::optional<CvssScore> parse_metric(const nlohmann::json& metrics, const char* key) {
  if (!metrics.contains(key) || !metrics[key].is_array() || metrics[key].empty()) {
    return std::nullopt;
  }
  const auto& data = metrics[key][0];
  if (!data.contains("cvssData")) return std::nullopt;
  CvssScore s;
  s.score = data["cvssData"].value("baseScore", 0.0);
  s.vector_string = data["cvssData"].value("vectorString", "");
  return s;
}

CveRecord parse_cve(const nlohmann::json& cve, const std::string& where) {
  CveRecord rec;
  if (!cve.contains("id") || !cve["id"].is_string()) {
    throw FeedParseError("nvd feed: missing cve.id at " + where);
  }
  rec.id = cve["id"].get<std::string>();
  if (!std::regex_match(rec.id, kCveIdRe)) {
    throw FeedParseError("nvd feed: malformed CVE id \"" + rec.id + "\" at " + where);
  }

  if (cve.contains("descriptions")) {
    for (const auto& d : cve["descriptions"]) {
      if (d.value("lang", "") == "en") {
        rec.description = d.value("value", "");
        break;
      }
    }
  }

  if (cve.contains("weaknesses")) {
    for (const auto& w : cve["weaknesses"]) {
      if (!w.contains("description")) continue;
      for (const auto& d : w["description"]) {
        if (d.value("lang", "") != "en") continue;
        std::string v = d.value("value", "");
        if (v.empty()) continue;
        if (v == "NVD-CWE-noinfo") v = kCweNoInfo;
        if (std::find(rec.cwe_ids.begin(), rec.cwe_ids.end(), v) == rec.cwe_ids.end()) {
          rec.cwe_ids.push_back(v);
        }
      }
    }
  }

  if (cve.contains("metrics")) {
    rec.cvss31 = parse_metric(cve["metrics"], "cvssMetricV31");
    rec.cvss2 = parse_metric(cve["metrics"], "cvssMetricV2");
    for (const auto* m : {&rec.cvss31, &rec.cvss2}) {
      if (*m && ((*m)->score < 0.0 || (*m)->score > 10.0)) {
        throw FeedParseError("nvd feed: CVSS score out of [0,10] for " + rec.id + " at " + where);
      }
    }
  }

  if (cve.contains("configurations")) {
    for (const auto& conf : cve["configurations"]) {
      if (!conf.contains("nodes")) continue;
      // Applicability trees are flattened to a plain OR over cpeMatch
      // entries; AND ("running on") semantics are out of scope.
      for (const auto& node : conf["nodes"]) {
        if (!node.contains("cpeMatch")) continue;
        for (const auto& cm : node["cpeMatch"]) {
          if (!cm.value("vulnerable", true)) continue;
          if (!cm.contains("criteria")) {
            throw FeedParseError("nvd feed: cpeMatch without criteria for " + rec.id + " at " +
                                 where);
          }
          CpeMatchRange range;
          try {
            range.base = parse_cpe(cm["criteria"].get<std::string>(), CpeParseMode::Lenient);
          } catch (const MalformedCpe& e) {
            throw FeedParseError("nvd feed: bad criteria for " + rec.id + " at " + where + ": " +
                                 e.what());
          }
          if (cm.contains("versionStartIncluding")) {
            range.start = VersionBound{ascii_lower(cm["versionStartIncluding"].get<std::string>()), true};
          } else if (cm.contains("versionStartExcluding")) {
            range.start = VersionBound{ascii_lower(cm["versionStartExcluding"].get<std::string>()), false};
          }
          if (cm.contains("versionEndIncluding")) {
            range.end = VersionBound{ascii_lower(cm["versionEndIncluding"].get<std::string>()), true};
          } else if (cm.contains("versionEndExcluding")) {
            range.end = VersionBound{ascii_lower(cm["versionEndExcluding"].get<std::string>()), false};
          }
          if (range.base.version.is_value() && (range.start || range.end)) {
            throw FeedParseError("nvd feed: criteria with literal version and a range for " +
                                 rec.id + " at " + where);
          }
          rec.configurations.push_back(std::move(range));
        }
      }
    }
  }
  return rec;
}

}  // namespace

const CveRecord* VulnIndex::find(std::string_view cve_id) const {
  auto it = records_.find(std::string(cve_id));
  return it == records_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* VulnIndex::product_lookup(std::string_view vendor,
                                                          std::string_view product) const {
  auto it = product_index_.find({ascii_lower(vendor), ascii_lower(product)});
  return it == product_index_.end() ? nullptr : &it->second;
}

VulnIndex VulnIndex::from_records(std::vector<CveRecord> records, FeedMeta meta) {
  VulnIndex idx;
  for (auto& rec : records) {
    idx.records_[rec.id] = std::move(rec);
  }
  for (const auto& [id, rec] : idx.records_) {
    for (const CpeMatchRange& range : rec.configurations) {
      if (!range.base.vendor.is_value() || !range.base.product.is_value()) continue;
      auto key = std::make_pair(range.base.vendor.str(), range.base.product.str());
      auto& ids = idx.product_index_[key];
      if (ids.empty() || ids.back() != id) ids.push_back(id);
    }
  }
  meta.record_count = idx.records_.size();
  idx.meta_ = std::move(meta);
  return idx;
}

VulnIndex ingest_nvd_feed(const std::vector<std::string>& documents, const IngestOptions& opts) {
  std::vector<CveRecord> records;
  std::size_t duplicates = 0;
  std::map<std::string, std::size_t> by_id;

  for (std::size_t d = 0; d < documents.size(); ++d) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(documents[d]);
    } catch (const nlohmann::json::exception& e) {
      throw FeedParseError("nvd feed: document " + std::to_string(d) + " is not valid JSON: " +
                           e.what());
    }
    if (!doc.contains("vulnerabilities") || !doc["vulnerabilities"].is_array()) {
      throw FeedParseError("nvd feed: document " + std::to_string(d) +
                           " has no vulnerabilities array");
    }
    std::size_t v = 0;
    for (const auto& entry : doc["vulnerabilities"]) {
      std::string where = position_label(d, v++);
      if (!entry.contains("cve")) {
        throw FeedParseError("nvd feed: entry without cve object at " + where);
      }
      CveRecord rec = parse_cve(entry["cve"], where);
      auto it = by_id.find(rec.id);
      if (it != by_id.end()) {
        ++duplicates;
        records[it->second] = std::move(rec);  // last occurrence wins
      } else {
        by_id.emplace(rec.id, records.size());
        records.push_back(std::move(rec));
      }
    }
  }

  FeedMeta meta;
  meta.source_label = opts.source_label;
  meta.duplicate_count = duplicates;
  meta.ingested_at = opts.timestamp_override ? *opts.timestamp_override : utc_now_iso8601();
  return VulnIndex::from_records(std::move(records), std::move(meta));
}

// ---- persistence --------------------------------------------------------

namespace {

constexpr int kIndexFormatVersion = 1;

nlohmann::ordered_json score_to_json(const CvssScore& s) {
  return {{"score", s.score}, {"vector", s.vector_string}};
}

CvssScore score_from_json(const nlohmann::json& j) {
  return {j.at("score").get<double>(), j.value("vector", "")};
}

nlohmann::ordered_json bound_to_json(const VersionBound& b) {
  return {{"value", b.value}, {"inclusive", b.inclusive}};
}

VersionBound bound_from_json(const nlohmann::json& j) {
  return {j.at("value").get<std::string>(), j.at("inclusive").get<bool>()};
}

}  // namespace

void save_index(const VulnIndex& index, const std::filesystem::path& path) {
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& [id, rec] : index.records()) {
    nlohmann::ordered_json jr;
    jr["id"] = rec.id;
    jr["description"] = rec.description;
    jr["cwe_ids"] = rec.cwe_ids;
    if (rec.cvss31) jr["cvss31"] = score_to_json(*rec.cvss31);
    if (rec.cvss2) jr["cvss2"] = score_to_json(*rec.cvss2);
    nlohmann::ordered_json confs = nlohmann::ordered_json::array();
    for (const CpeMatchRange& r : rec.configurations) {
      nlohmann::ordered_json jc;
      jc["criteria"] = format_cpe(r.base);
      if (r.start) jc["start"] = bound_to_json(*r.start);
      if (r.end) jc["end"] = bound_to_json(*r.end);
      confs.push_back(std::move(jc));
    }
    jr["configurations"] = std::move(confs);
    recs.push_back(std::move(jr));
  }

  nlohmann::ordered_json doc{
      {"format_version", kIndexFormatVersion},
      {"feed_meta",
       {{"source_label", index.meta().source_label},
        {"record_count", index.meta().record_count},
        {"duplicate_count", index.meta().duplicate_count},
        {"ingested_at", index.meta().ingested_at}}},
      {"records", std::move(recs)},
  };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write index file: " + path.string());
  out << doc.dump(2) << "\n";
  out.flush();
  if (!out) throw IoError("write error on index file: " + path.string());
}

VulnIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open index file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    throw IndexVersionMismatch("index file " + path.string() +
                               " is not a firmscan index (unreadable container)");
  }
  if (!doc.is_object() || doc.value("format_version", -1) != kIndexFormatVersion) {
    throw IndexVersionMismatch("index file " + path.string() +
                               " has no format_version " + std::to_string(kIndexFormatVersion));
  }

  std::vector<CveRecord> records;
  try {
    for (const auto& jr : doc.at("records")) {
      CveRecord rec;
      rec.id = jr.at("id").get<std::string>();
      rec.description = jr.at("description").get<std::string>();
      rec.cwe_ids = jr.at("cwe_ids").get<std::vector<std::string>>();
      if (jr.contains("cvss31")) rec.cvss31 = score_from_json(jr["cvss31"]);
      if (jr.contains("cvss2")) rec.cvss2 = score_from_json(jr["cvss2"]);
      for (const auto& jc : jr.at("configurations")) {
        CpeMatchRange r;
        r.base = parse_cpe(jc.at("criteria").get<std::string>(), CpeParseMode::Strict);
        if (jc.contains("start")) r.start = bound_from_json(jc["start"]);
        if (jc.contains("end")) r.end = bound_from_json(jc["end"]);
        rec.configurations.push_back(std::move(r));
      }
      records.push_back(std::move(rec));
    }

    FeedMeta meta;
    const auto& jm = doc.at("feed_meta");
    meta.source_label = jm.at("source_label").get<std::string>();
    meta.duplicate_count = jm.value("duplicate_count", 0u);
    meta.ingested_at = jm.at("ingested_at").get<std::string>();
    return VulnIndex::from_records(std::move(records), std::move(meta));
  } catch (const nlohmann::json::exception& e) {
    throw IndexVersionMismatch("index file " + path.string() + " is structurally invalid: " +
                               e.what());
  }
}

}  // namespace firmscan
