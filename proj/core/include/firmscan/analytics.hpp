// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firmscan/inventory.hpp"
#include "firmscan/matcher.hpp"
#include "firmscan/memclass.hpp"
#include "firmscan/severity.hpp"

namespace firmscan {

/// One (firmware, component, CVE) counting unit. The same CVE reached
/// through two components of one firmware yields two occurrences.
struct Occurrence {
  std::string firmware_id;
  std::string component_cpe;  // formatted CPE string
  std::string cve_id;
  std::optional<std::string> cwe_id;  // the classifying CWE when one exists
  SeverityBucket severity = SeverityBucket::None;
  MemoryClass mem_class = MemoryClass::NotMemory;
  ClassificationSource source = ClassificationSource::Default;

  bool operator==(const Occurrence&) const = default;
};

struct FirmwareReport {
  std::string firmware_id;
  std::vector<Occurrence> occurrences;
  std::vector<std::string> warnings;  // skipped components etc.
};

/// match -> classify -> band, per component. Components without a literal
/// version are skipped with a warning instead of failing the firmware.
FirmwareReport build_occurrences(const std::string& firmware_id,
                                 const std::vector<Component>& components,
                                 const VulnIndex& index, const Classifier& classifier);

struct CweCount {
  std::string cwe_id;  // "CWE-noinfo" groups records without usable CWEs
  std::size_t count = 0;
  MemoryClass mem_class = MemoryClass::NotMemory;  // majority over occurrences

  bool operator==(const CweCount&) const = default;
};

struct CpeCount {
  std::string cpe;
  std::size_t count = 0;
  std::array<std::size_t, 5> by_severity{};  // indexed by SeverityBucket
  std::array<std::size_t, 4> by_class{};     // indexed by MemoryClass

  bool operator==(const CpeCount&) const = default;
};

/// Ranked by count descending, ties by id ascending.
std::vector<CweCount> top_cwes(std::span<const Occurrence> occurrences, std::size_t n);
std::vector<CpeCount> top_cpes(std::span<const Occurrence> occurrences, std::size_t n);

/// Fraction of occurrences whose class is memory-related. Throws
/// EmptyLedger on an empty span.
double memory_share(std::span<const Occurrence> occurrences);

/// Same, grouped by component CPE.
std::map<std::string, double> memory_share_by_component(std::span<const Occurrence> occurrences);

struct ImpactReport {
  std::map<SeverityBucket, std::size_t> before;
  std::map<SeverityBucket, std::size_t> after;
  double eliminated_share = 0.0;
  double reduction_factor = 1.0;  // +inf when everything is eliminated
  std::map<SeverityBucket, double> per_firmware_before;
  std::map<SeverityBucket, double> per_firmware_after;
  std::size_t firmware_count = 0;
};

/// Secure-by-Design impact model: the after-ledger keeps only
/// occurrences with mem_class == NotMemory. firmware_count defaults to
/// the number of distinct firmware ids in the ledger.
ImpactReport estimate_sbd_impact(std::span<const Occurrence> occurrences,
                                 std::optional<std::size_t> firmware_count = std::nullopt);

struct CorpusReport {
  std::size_t firmware_count = 0;
  std::size_t occurrence_total = 0;
  std::vector<CweCount> top_cwes;
  std::vector<CpeCount> top_cpes;
  std::map<SeverityBucket, std::size_t> severity_histogram;
  std::map<MemoryClass, std::size_t> memory_histogram;
  std::map<SeverityBucket, double> per_firmware_mean_by_severity;
  std::vector<std::string> warnings;
};

struct CorpusOptions {
  std::size_t top_n_cwes = 10;
  std::size_t top_n_cpes = 5;
};

/// Merges per-firmware ledgers (sorted by firmware_id first, so the
/// result is independent of build order).
CorpusReport corpus_summary(std::span<const FirmwareReport> reports, const CorpusOptions& = {});

}  // namespace firmscan
