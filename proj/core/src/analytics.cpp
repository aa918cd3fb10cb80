// SPDX-License-Identifier: Apache-2.0
#include "firmscan/analytics.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "firmscan/errors.hpp"

namespace firmscan {

namespace {

/// The CWE recorded for one occurrence: the rule-table hit when the
/// classification used one, the first linked id otherwise, and the
/// noinfo sentinel when the record carries no usable link.
std::optional<std::string> occurrence_cwe(const CveRecord& rec, const ClassificationResult& cls) {
  if (cls.matched_cwe) return cls.matched_cwe;
  if (rec.cwe_ids.empty()) return std::nullopt;
  return rec.cwe_ids.front();
}

}  // namespace

FirmwareReport build_occurrences(const std::string& firmware_id,
                                 const std::vector<Component>& components,
                                 const VulnIndex& index, const Classifier& classifier) {
  FirmwareReport report;
  report.firmware_id = firmware_id;

  for (const Component& comp : components) {
    std::string cpe_str = format_cpe(comp.cpe);
    std::vector<const CveRecord*> matches;
    try {
      matches = match_cpe(index, comp.cpe);
    } catch (const UnresolvedVersion&) {
      report.warnings.push_back("skipped " + cpe_str + ": unresolved version");
      continue;
    }
    for (const CveRecord* rec : matches) {
      ClassificationResult cls = classifier.classify_cve(*rec);
      SeverityAssessment sev = cvss_severity(*rec);
      Occurrence occ;
      occ.firmware_id = firmware_id;
      occ.component_cpe = cpe_str;
      occ.cve_id = rec->id;
      occ.cwe_id = occurrence_cwe(*rec, cls);
      occ.severity = sev.bucket;
      occ.mem_class = cls.mem_class;
      occ.source = cls.source;
      report.occurrences.push_back(std::move(occ));
    }
  }
  return report;
}

std::vector<CweCount> top_cwes(std::span<const Occurrence> occurrences, std::size_t n) {
  std::map<std::string, std::pair<std::size_t, std::array<std::size_t, 4>>> counts;
  for (const Occurrence& o : occurrences) {
    std::string key = o.cwe_id.value_or(kCweNoInfo);
    auto& slot = counts[key];
    ++slot.first;
    ++slot.second[static_cast<std::size_t>(o.mem_class)];
  }

  std::vector<CweCount> out;
  out.reserve(counts.size());
  for (const auto& [id, slot] : counts) {
    CweCount c;
    c.cwe_id = id;
    c.count = slot.first;
    std::size_t best = 0;
    for (std::size_t k = 1; k < slot.second.size(); ++k) {
      if (slot.second[k] > slot.second[best]) best = k;
    }
    c.mem_class = static_cast<MemoryClass>(best);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const CweCount& a, const CweCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.cwe_id < b.cwe_id;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

std::vector<CpeCount> top_cpes(std::span<const Occurrence> occurrences, std::size_t n) {
  std::map<std::string, CpeCount> counts;
  for (const Occurrence& o : occurrences) {
    CpeCount& c = counts[o.component_cpe];
    c.cpe = o.component_cpe;
    ++c.count;
    ++c.by_severity[static_cast<std::size_t>(o.severity)];
    ++c.by_class[static_cast<std::size_t>(o.mem_class)];
  }
  std::vector<CpeCount> out;
  out.reserve(counts.size());
  for (auto& [_, c] : counts) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const CpeCount& a, const CpeCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.cpe < b.cpe;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

double memory_share(std::span<const Occurrence> occurrences) {
  if (occurrences.empty()) throw EmptyLedger("memory_share: empty occurrence ledger");
  std::size_t memory = 0;
  for (const Occurrence& o : occurrences) {
    if (is_memory_related(o.mem_class)) ++memory;
  }
  return static_cast<double>(memory) / static_cast<double>(occurrences.size());
}

std::map<std::string, double> memory_share_by_component(std::span<const Occurrence> occurrences) {
  if (occurrences.empty()) throw EmptyLedger("memory_share_by_component: empty occurrence ledger");
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // cpe -> (memory, total)
  for (const Occurrence& o : occurrences) {
    auto& slot = counts[o.component_cpe];
    ++slot.second;
    if (is_memory_related(o.mem_class)) ++slot.first;
  }
  std::map<std::string, double> out;
  for (const auto& [cpe, slot] : counts) {
    out[cpe] = static_cast<double>(slot.first) / static_cast<double>(slot.second);
  }
  return out;
}

ImpactReport estimate_sbd_impact(std::span<const Occurrence> occurrences,
                                 std::optional<std::size_t> firmware_count) {
  if (occurrences.empty()) throw EmptyLedger("estimate_sbd_impact: empty occurrence ledger");

  ImpactReport report;
  std::set<std::string> firmware_ids;
  for (const Occurrence& o : occurrences) {
    firmware_ids.insert(o.firmware_id);
    ++report.before[o.severity];
    if (!is_memory_related(o.mem_class)) ++report.after[o.severity];
  }
  report.firmware_count = firmware_count.value_or(firmware_ids.size());

  std::size_t total_before = occurrences.size();
  std::size_t total_after = 0;
  for (const auto& [_, c] : report.after) total_after += c;

  report.eliminated_share =
      1.0 - static_cast<double>(total_after) / static_cast<double>(total_before);
  report.reduction_factor = total_after == 0
                                ? std::numeric_limits<double>::infinity()
                                : static_cast<double>(total_before) / static_cast<double>(total_after);

  if (report.firmware_count > 0) {
    auto fc = static_cast<double>(report.firmware_count);
    for (const auto& [bucket, c] : report.before) {
      report.per_firmware_before[bucket] = static_cast<double>(c) / fc;
    }
    for (const auto& [bucket, c] : report.after) {
      report.per_firmware_after[bucket] = static_cast<double>(c) / fc;
    }
  }
  return report;
}

CorpusReport corpus_summary(std::span<const FirmwareReport> reports, const CorpusOptions& opts) {
  std::vector<const FirmwareReport*> sorted;
  sorted.reserve(reports.size());
  for (const FirmwareReport& r : reports) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const FirmwareReport* a, const FirmwareReport* b) {
    return a->firmware_id < b->firmware_id;
  });

  CorpusReport out;
  out.firmware_count = sorted.size();
  std::vector<Occurrence> merged;
  for (const FirmwareReport* r : sorted) {
    merged.insert(merged.end(), r->occurrences.begin(), r->occurrences.end());
    for (const std::string& w : r->warnings) {
      out.warnings.push_back(r->firmware_id + ": " + w);
    }
  }

  out.occurrence_total = merged.size();
  for (const Occurrence& o : merged) {
    ++out.severity_histogram[o.severity];
    ++out.memory_histogram[o.mem_class];
  }
  out.top_cwes = top_cwes(merged, opts.top_n_cwes);
  out.top_cpes = top_cpes(merged, opts.top_n_cpes);

  if (out.firmware_count > 0) {
    auto fc = static_cast<double>(out.firmware_count);
    for (const auto& [bucket, c] : out.severity_histogram) {
      out.per_firmware_mean_by_severity[bucket] = static_cast<double>(c) / fc;
    }
  }
  return out;
}

}  // namespace firmscan
