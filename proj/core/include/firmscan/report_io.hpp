// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>

#include "firmscan/analytics.hpp"

namespace firmscan {

/// occurrences.csv with the exact column set
/// firmware_id,component_cpe,cve_id,cwe_id,severity,mem_class,classification_source.
/// UTF-8, header row, LF line endings.
void write_occurrences_csv(std::ostream& out, std::span<const Occurrence> occurrences);
std::vector<Occurrence> read_occurrences_csv(std::istream& in);  // CsvParseError

void write_top_cwes_csv(std::ostream& out, std::span<const CweCount> rows);
void write_top_cpes_by_severity_csv(std::ostream& out, std::span<const CpeCount> rows);
void write_top_cpes_by_class_csv(std::ostream& out, std::span<const CpeCount> rows);

nlohmann::ordered_json impact_to_json(const ImpactReport& report);
nlohmann::ordered_json corpus_to_json(const CorpusReport& report);
nlohmann::ordered_json firmware_report_to_json(const FirmwareReport& report);

}  // namespace firmscan
