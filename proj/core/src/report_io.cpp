// SPDX-License-Identifier: Apache-2.0
#include "firmscan/report_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "firmscan/errors.hpp"

namespace firmscan {

namespace {

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw CsvParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
  }
  fields.push_back(std::move(cur));
  return fields;
}

/// Rounds to 2 decimal places for export; full precision stays internal.
double round2(double v) {
  return std::round(v * 100.0) / 100.0;
}

nlohmann::ordered_json severity_map_to_json(const std::map<SeverityBucket, std::size_t>& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (SeverityBucket b : {SeverityBucket::None, SeverityBucket::Low, SeverityBucket::Medium,
                           SeverityBucket::High, SeverityBucket::Critical}) {
    auto it = m.find(b);
    out[to_string(b)] = it == m.end() ? 0 : it->second;
  }
  return out;
}

nlohmann::ordered_json severity_means_to_json(const std::map<SeverityBucket, double>& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (SeverityBucket b : {SeverityBucket::None, SeverityBucket::Low, SeverityBucket::Medium,
                           SeverityBucket::High, SeverityBucket::Critical}) {
    auto it = m.find(b);
    out[to_string(b)] = round2(it == m.end() ? 0.0 : it->second);
  }
  return out;
}

}  // namespace

void write_occurrences_csv(std::ostream& out, std::span<const Occurrence> occurrences) {
  out << "firmware_id,component_cpe,cve_id,cwe_id,severity,mem_class,classification_source\n";
  for (const Occurrence& o : occurrences) {
    out << csv_quote(o.firmware_id) << ',' << csv_quote(o.component_cpe) << ','
        << csv_quote(o.cve_id) << ',' << csv_quote(o.cwe_id.value_or("")) << ','
        << to_string(o.severity) << ',' << to_string(o.mem_class) << ',' << to_string(o.source)
        << '\n';
  }
}

std::vector<Occurrence> read_occurrences_csv(std::istream& in) {
  std::vector<Occurrence> out;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw CsvParseError("occurrences csv: empty input");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "firmware_id,component_cpe,cve_id,cwe_id,severity,mem_class,classification_source") {
    throw CsvParseError("occurrences csv: unexpected header: " + line);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv_line(line, line_no);
    if (f.size() != 7) {
      throw CsvParseError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                          std::to_string(f.size()));
    }
    Occurrence o;
    o.firmware_id = f[0];
    o.component_cpe = f[1];
    o.cve_id = f[2];
    if (!f[3].empty()) o.cwe_id = f[3];
    auto sev = severity_from(f[4]);
    auto cls = memory_class_from(f[5]);
    auto src = classification_source_from(f[6]);
    if (!sev || !cls || !src) {
      throw CsvParseError("line " + std::to_string(line_no) + ": bad enum field");
    }
    o.severity = *sev;
    o.mem_class = *cls;
    o.source = *src;
    out.push_back(std::move(o));
  }
  return out;
}

void write_top_cwes_csv(std::ostream& out, std::span<const CweCount> rows) {
  out << "cwe_id,count,mem_class\n";
  for (const CweCount& r : rows) {
    out << csv_quote(r.cwe_id) << ',' << r.count << ',' << to_string(r.mem_class) << '\n';
  }
}

void write_top_cpes_by_severity_csv(std::ostream& out, std::span<const CpeCount> rows) {
  out << "cpe,total,none,low,medium,high,critical\n";
  for (const CpeCount& r : rows) {
    out << csv_quote(r.cpe) << ',' << r.count;
    for (std::size_t s : r.by_severity) out << ',' << s;
    out << '\n';
  }
}

void write_top_cpes_by_class_csv(std::ostream& out, std::span<const CpeCount> rows) {
  out << "cpe,total,not_memory,spatial,temporal,other_memory\n";
  for (const CpeCount& r : rows) {
    out << csv_quote(r.cpe) << ',' << r.count;
    for (std::size_t s : r.by_class) out << ',' << s;
    out << '\n';
  }
}

nlohmann::ordered_json impact_to_json(const ImpactReport& report) {
  nlohmann::ordered_json out;
  out["firmware_count"] = report.firmware_count;
  out["before"] = severity_map_to_json(report.before);
  out["after"] = severity_map_to_json(report.after);
  out["eliminated_share"] = report.eliminated_share;
  if (std::isinf(report.reduction_factor)) {
    out["reduction_factor"] = "inf";
  } else {
    out["reduction_factor"] = report.reduction_factor;
  }
  out["per_firmware_before"] = severity_means_to_json(report.per_firmware_before);
  out["per_firmware_after"] = severity_means_to_json(report.per_firmware_after);
  return out;
}

nlohmann::ordered_json corpus_to_json(const CorpusReport& report) {
  nlohmann::ordered_json out;
  out["firmware_count"] = report.firmware_count;
  out["occurrence_total"] = report.occurrence_total;

  nlohmann::ordered_json cwes = nlohmann::ordered_json::array();
  for (const CweCount& c : report.top_cwes) {
    cwes.push_back(
        {{"cwe_id", c.cwe_id}, {"count", c.count}, {"mem_class", to_string(c.mem_class)}});
  }
  out["top_cwes"] = std::move(cwes);

  nlohmann::ordered_json cpes = nlohmann::ordered_json::array();
  for (const CpeCount& c : report.top_cpes) {
    nlohmann::ordered_json by_sev = nlohmann::ordered_json::object();
    for (SeverityBucket b : {SeverityBucket::None, SeverityBucket::Low, SeverityBucket::Medium,
                             SeverityBucket::High, SeverityBucket::Critical}) {
      by_sev[to_string(b)] = c.by_severity[static_cast<std::size_t>(b)];
    }
    nlohmann::ordered_json by_cls = nlohmann::ordered_json::object();
    for (MemoryClass m : {MemoryClass::NotMemory, MemoryClass::Spatial, MemoryClass::Temporal,
                          MemoryClass::OtherMemory}) {
      by_cls[to_string(m)] = c.by_class[static_cast<std::size_t>(m)];
    }
    cpes.push_back({{"cpe", c.cpe},
                    {"count", c.count},
                    {"by_severity", std::move(by_sev)},
                    {"by_class", std::move(by_cls)}});
  }
  out["top_cpes"] = std::move(cpes);

  out["severity_histogram"] = severity_map_to_json(report.severity_histogram);
  nlohmann::ordered_json mem = nlohmann::ordered_json::object();
  for (MemoryClass m : {MemoryClass::NotMemory, MemoryClass::Spatial, MemoryClass::Temporal,
                        MemoryClass::OtherMemory}) {
    auto it = report.memory_histogram.find(m);
    mem[to_string(m)] = it == report.memory_histogram.end() ? 0 : it->second;
  }
  out["memory_histogram"] = std::move(mem);
  out["per_firmware_mean_by_severity"] =
      severity_means_to_json(report.per_firmware_mean_by_severity);
  out["warnings"] = report.warnings;
  return out;
}

nlohmann::ordered_json firmware_report_to_json(const FirmwareReport& report) {
  nlohmann::ordered_json out;
  out["firmware_id"] = report.firmware_id;
  out["occurrence_total"] = report.occurrences.size();

  std::map<SeverityBucket, std::size_t> sev;
  std::map<MemoryClass, std::size_t> mem;
  for (const Occurrence& o : report.occurrences) {
    ++sev[o.severity];
    ++mem[o.mem_class];
  }
  out["severity_histogram"] = severity_map_to_json(sev);
  nlohmann::ordered_json jmem = nlohmann::ordered_json::object();
  for (MemoryClass m : {MemoryClass::NotMemory, MemoryClass::Spatial, MemoryClass::Temporal,
                        MemoryClass::OtherMemory}) {
    auto it = mem.find(m);
    jmem[to_string(m)] = it == mem.end() ? 0 : it->second;
  }
  out["memory_histogram"] = std::move(jmem);

  nlohmann::ordered_json occs = nlohmann::ordered_json::array();
  for (const Occurrence& o : report.occurrences) {
    occs.push_back({{"component_cpe", o.component_cpe},
                    {"cve_id", o.cve_id},
                    {"cwe_id", o.cwe_id.value_or("")},
                    {"severity", to_string(o.severity)},
                    {"mem_class", to_string(o.mem_class)},
                    {"classification_source", to_string(o.source)}});
  }
  out["occurrences"] = std::move(occs);
  out["warnings"] = report.warnings;
  return out;
}

}  // namespace firmscan
