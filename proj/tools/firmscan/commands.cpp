// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "firmscan/analytics.hpp"
#include "firmscan/archive.hpp"
#include "firmscan/cyclonedx.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/extraction.hpp"
#include "firmscan/hash.hpp"
#include "firmscan/llm_client.hpp"
#include "firmscan/report_io.hpp"

namespace firmscan::cli {

namespace fs = std::filesystem;

namespace {

void note(const std::string& msg) {
  std::cerr << "firmscan: " << msg << "\n";
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on " + path.string());
  return text;
}

void write_text_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

RuleTable load_rule_table(const RunConfig& cfg) {
  return cfg.rule_table_path.empty() ? RuleTable::builtin()
                                     : RuleTable::load_file(cfg.rule_table_path);
}

KnownComponentsTable load_known_components(const RunConfig& cfg) {
  return cfg.known_components_path.empty() ? KnownComponentsTable::builtin()
                                           : KnownComponentsTable::load_file(cfg.known_components_path);
}

std::shared_ptr<LlmClassifier> make_llm(const RunConfig& cfg) {
  if (cfg.classifier_mode != ClassifierMode::RuleThenLlm) return nullptr;
  LlmClientConfig lc;
  lc.endpoint = *cfg.llm_endpoint;
  lc.api_key = cfg.classifier_api_key;
  return std::make_shared<LlmClassifier>(std::move(lc));
}

bool looks_like_tar(ByteView data) {
  return data.size() >= 262 && std::memcmp(data.data() + 257, "ustar", 5) == 0;
}

bool looks_like_json(const fs::path& path, ByteView data) {
  if (path.extension() == ".json") return true;
  for (std::uint8_t c : data) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

/// Digest identifying a pre-extracted tree (directory or tar input),
/// filling the role the image hash plays for binary inputs.
std::string tree_digest(const FilesystemTree& tree) {
  std::string acc;
  for (const FsEntry& e : tree.entries()) {
    acc += e.path;
    acc.push_back('\0');
    acc += to_string(e.kind);
    acc.push_back('\0');
    acc += e.content_digest;
    acc.push_back('\n');
  }
  return sha256_hex(acc);
}

struct ScanOutcome {
  ExtractedFs fs;
  SignatureHit hit;       // kind of the winning signature; synthetic for archives
  std::string digest;     // image digest, or tree digest for archives
  std::string source_id;  // input file name
};

ScanOutcome scan_input(const RunConfig& cfg, const fs::path& input) {
  ScanOutcome outcome;
  outcome.source_id = input.filename().string();

  if (fs::is_directory(input)) {
    outcome.fs = load_tree_from_archive(input);
    outcome.digest = tree_digest(outcome.fs.tree);
    outcome.hit = {SignatureKind::SquashFs, 0, Endianness::Little, "pre-extracted directory"};
    return outcome;
  }

  RawFirmware image = RawFirmware::from_file(input);
  if (looks_like_tar(image.view())) {
    outcome.fs = load_tree_from_tar(image.view());
    outcome.digest = image.digest;
    outcome.hit = {SignatureKind::SquashFs, 0, Endianness::Little, "tar archive"};
    return outcome;
  }

  if (!cfg.cache_dir.empty()) {
    fs::path cached = fs::path(cfg.cache_dir) / "extracted" / image.digest;
    if (auto loaded = load_materialized_tree(cached)) {
      note("cache hit for " + image.digest);
      outcome.fs = std::move(loaded->fs);
      outcome.hit = loaded->winning_hit;
      outcome.digest = image.digest;
      return outcome;
    }
  }

  ExtractionResult extracted = extract_root_filesystem(image);
  if (!cfg.cache_dir.empty()) {
    fs::path cached = fs::path(cfg.cache_dir) / "extracted" / image.digest;
    materialize_tree(extracted.fs, cached, image.digest, extracted.winning_hit);
  }
  outcome.fs = std::move(extracted.fs);
  outcome.hit = extracted.winning_hit;
  outcome.digest = image.digest;
  return outcome;
}

nlohmann::ordered_json extraction_manifest(const ScanOutcome& outcome) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const FsEntry& e : outcome.fs.tree.entries()) {
    entries.push_back({{"path", display_lossy(e.path)},
                       {"kind", to_string(e.kind)},
                       {"size", e.size},
                       {"mode", e.mode},
                       {"digest", e.content_digest},
                       {"link_target", display_lossy(e.link_target)}});
  }
  return {{"source", outcome.source_id},
          {"digest", outcome.digest},
          {"winning_hit",
           {{"kind", to_string(outcome.hit.kind)},
            {"offset", outcome.hit.offset},
            {"detail", outcome.hit.detail}}},
          {"entries", std::move(entries)}};
}

std::vector<Component> sbom_refs_to_components(const SbomContents& sbom) {
  std::vector<Component> components;
  for (const SbomComponentRef& ref : sbom.components) {
    Component c;
    c.cpe = parse_cpe(ref.cpe, CpeParseMode::Lenient);
    c.display_name = ref.name.empty() ? (c.cpe.product.is_value() ? c.cpe.product.str() : "?")
                                      : ref.name;
    c.version_raw = ref.version;
    components.push_back(std::move(c));
  }
  return components;
}

struct AnalyzeInputs {
  std::string firmware_id;
  std::vector<Component> components;
  std::optional<ScanOutcome> scan;  // present when the input was an image
};

AnalyzeInputs analyze_inputs_for(const RunConfig& cfg, const fs::path& input,
                                 const KnownComponentsTable& table) {
  AnalyzeInputs out;
  if (!fs::is_directory(input)) {
    Bytes head = bytes_of(read_text_file(input));
    if (looks_like_json(input, ByteView(head))) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(head);
      } catch (const nlohmann::json::exception& e) {
        throw SerializationError("SBOM " + input.string() + " is not valid JSON: " + e.what());
      }
      SbomContents sbom = read_sbom(doc);
      out.firmware_id =
          sbom.firmware_source_id.empty() ? input.filename().string() : sbom.firmware_source_id;
      out.components = sbom_refs_to_components(sbom);
      return out;
    }
  }
  out.scan = scan_input(cfg, input);
  out.firmware_id = out.scan->source_id;
  out.components = identify_components(out.scan->fs.tree, out.scan->fs.contents.reader(), table);
  return out;
}

ImpactReport impact_or_empty(std::span<const Occurrence> occurrences,
                             std::optional<std::size_t> firmware_count) {
  if (!occurrences.empty()) return estimate_sbd_impact(occurrences, firmware_count);
  ImpactReport empty;
  empty.firmware_count = firmware_count.value_or(0);
  empty.eliminated_share = 0.0;
  empty.reduction_factor = 1.0;
  return empty;
}

int run_guarded(const char* what, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    note(std::string(what) + ": " + e.what());
    return kConfigError;
  } catch (const NoFilesystemFound& e) {
    note(std::string(what) + ": no filesystem found: " + e.what());
    return kExtractionError;
  } catch (const AllExtractionsFailed& e) {
    note(std::string(what) + ": all extractions failed: " + e.what());
    for (const std::string& item : e.per_hit_errors) note("  " + item);
    return kExtractionError;
  } catch (const FeedParseError& e) {
    note(std::string(what) + ": " + e.what());
    return kParseError;
  } catch (const CsvParseError& e) {
    note(std::string(what) + ": " + e.what());
    return kParseError;
  } catch (const IndexVersionMismatch& e) {
    note(std::string(what) + ": " + e.what());
    return kParseError;
  } catch (const SerializationError& e) {
    note(std::string(what) + ": " + e.what());
    return kParseError;
  } catch (const MalformedCpe& e) {
    note(std::string(what) + ": " + e.what());
    return kParseError;
  } catch (const IoError& e) {
    note(std::string(what) + ": " + e.what());
    return kIoError;
  } catch (const Error& e) {
    note(std::string(what) + ": " + e.what());
    return kIoError;
  }
}

}  // namespace

int cmd_feed_ingest(const RunConfig& cfg) {
  return run_guarded("feed ingest", [&] {
    if (cfg.nvd_feed_paths.empty()) throw ConfigError("feed ingest: no feed files given");
    if (cfg.index_path.empty()) throw ConfigError("feed ingest: --index is required");

    std::vector<std::string> docs;
    for (const std::string& p : cfg.nvd_feed_paths) {
      docs.push_back(read_text_file(p));
    }
    IngestOptions opts;
    opts.source_label = cfg.nvd_feed_paths.front();
    if (cfg.reproducible) opts.timestamp_override = "1970-01-01T00:00:00Z";
    VulnIndex index = ingest_nvd_feed(docs, opts);
    save_index(index, cfg.index_path);
    note("ingested " + std::to_string(index.records().size()) + " records (" +
         std::to_string(index.meta().duplicate_count) + " duplicates) into " + cfg.index_path);
    return kOk;
  });
}

int cmd_feed_fetch(const RunConfig& cfg, const std::string& cpe_query, int max_pages) {
  return run_guarded("feed fetch", [&] {
    if (cfg.offline) {
      throw ConfigError("feed fetch needs --online (offline mode is the default)");
    }
    if (cfg.index_path.empty()) throw ConfigError("feed fetch: --index is required");

    httplib::Client client("https://services.nvd.nist.gov");
    client.set_read_timeout(std::chrono::seconds(60));
    httplib::Headers headers;
    if (!cfg.nvd_api_key.empty()) headers.emplace("apiKey", cfg.nvd_api_key);

    std::vector<std::string> docs;
    int start = 0;
    for (int page = 0; page < max_pages; ++page) {
      std::string path = "/rest/json/cves/2.0?resultsPerPage=2000&startIndex=" +
                         std::to_string(start);
      if (!cpe_query.empty()) path += "&cpeName=" + cpe_query;
      auto res = client.Get(path, headers);
      if (!res || res->status != 200) {
        throw IoError("nvd fetch failed at startIndex " + std::to_string(start) +
                      (res ? " (status " + std::to_string(res->status) + ")" : ""));
      }
      docs.push_back(res->body);
      auto body = nlohmann::json::parse(res->body);
      int total = body.value("totalResults", 0);
      int got = static_cast<int>(body.value("vulnerabilities", nlohmann::json::array()).size());
      start += got;
      note("fetched " + std::to_string(start) + "/" + std::to_string(total) + " records");
      if (got == 0 || start >= total) break;
    }
    IngestOptions opts;
    opts.source_label = "nvd-api";
    VulnIndex index = ingest_nvd_feed(docs, opts);
    save_index(index, cfg.index_path);
    note("ingested " + std::to_string(index.records().size()) + " records into " + cfg.index_path);
    return kOk;
  });
}

int cmd_scan(const RunConfig& cfg, const std::string& image_path) {
  return run_guarded("scan", [&] {
    KnownComponentsTable table = load_known_components(cfg);
    ScanOutcome outcome = scan_input(cfg, image_path);
    std::vector<Component> components =
        identify_components(outcome.fs.tree, outcome.fs.contents.reader(), table);

    SbomMeta meta;
    meta.firmware_source_id = outcome.source_id;
    meta.firmware_digest = outcome.digest;
    meta.reproducible = cfg.reproducible;
    nlohmann::ordered_json sbom = emit_cyclonedx(components, meta);
    std::string sbom_text = serialize_sbom(sbom);

    fs::path out_base = fs::path(cfg.out_dir) / outcome.digest;
    write_text_file(out_base / "sbom.cdx.json", sbom_text);
    write_text_file(out_base / "manifest.json", extraction_manifest(outcome).dump(2) + "\n");
    if (cfg.to_stdout) std::cout << sbom_text;

    note("scanned " + outcome.source_id + ": " + std::to_string(outcome.fs.tree.entries().size()) +
         " entries, " + std::to_string(components.size()) + " components, sbom at " +
         (out_base / "sbom.cdx.json").string());
    return kOk;
  });
}

int cmd_analyze(const RunConfig& cfg, const std::string& input_path) {
  return run_guarded("analyze", [&] {
    cfg.validate();
    if (cfg.index_path.empty()) throw ConfigError("analyze: --index is required");
    VulnIndex index = load_index(cfg.index_path);

    KnownComponentsTable table = load_known_components(cfg);
    Classifier classifier(load_rule_table(cfg), make_llm(cfg));
    AnalyzeInputs inputs = analyze_inputs_for(cfg, input_path, table);

    FirmwareReport report =
        build_occurrences(inputs.firmware_id, inputs.components, index, classifier);

    fs::create_directories(cfg.out_dir);
    std::ostringstream csv;
    write_occurrences_csv(csv, report.occurrences);
    write_text_file(fs::path(cfg.out_dir) / "occurrences.csv", csv.str());
    std::string report_text = firmware_report_to_json(report).dump(2) + "\n";
    write_text_file(fs::path(cfg.out_dir) / "report.json", report_text);
    if (cfg.to_stdout) std::cout << report_text;

    for (const std::string& w : report.warnings) note("warning: " + w);
    note("analyzed " + inputs.firmware_id + ": " + std::to_string(report.occurrences.size()) +
         " occurrences across " + std::to_string(inputs.components.size()) + " components");
    return kOk;
  });
}

int cmd_corpus(const RunConfig& cfg, const std::string& input_dir) {
  return run_guarded("corpus", [&] {
    cfg.validate();
    if (cfg.index_path.empty()) throw ConfigError("corpus: --index is required");
    VulnIndex index = load_index(cfg.index_path);
    KnownComponentsTable table = load_known_components(cfg);
    Classifier classifier(load_rule_table(cfg), make_llm(cfg));

    std::vector<fs::path> inputs;
    if (!fs::is_directory(input_dir)) throw IoError("corpus: not a directory: " + input_dir);
    for (const auto& entry : fs::directory_iterator(input_dir)) {
      if (entry.is_regular_file()) inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) {
      note("corpus: no input files in " + input_dir);
      return kExtractionError;
    }

    struct Slot {
      std::optional<FirmwareReport> report;
      std::string failure;
    };
    std::vector<Slot> slots(inputs.size());
    std::atomic<std::size_t> next{0};
    unsigned jobs = std::min<unsigned>(cfg.effective_jobs(), inputs.size());

    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= inputs.size()) return;
        const fs::path& input = inputs[i];
        try {
          AnalyzeInputs ai = analyze_inputs_for(cfg, input, table);
          // Use the file name as the ledger id: unique within the corpus
          // directory and stable across runs.
          std::string firmware_id = input.filename().string();
          FirmwareReport report = build_occurrences(firmware_id, ai.components, index, classifier);

          if (ai.scan) {
            // also drop a per-image SBOM next to the corpus outputs
            SbomMeta meta;
            meta.firmware_source_id = ai.scan->source_id;
            meta.firmware_digest = ai.scan->digest;
            meta.reproducible = cfg.reproducible;
            write_text_file(fs::path(cfg.out_dir) / ai.scan->digest / "sbom.cdx.json",
                            serialize_sbom(emit_cyclonedx(ai.components, meta)));
            write_text_file(fs::path(cfg.out_dir) / ai.scan->digest / "manifest.json",
                            extraction_manifest(*ai.scan).dump(2) + "\n");
          }
          slots[i].report = std::move(report);
        } catch (const Error& e) {
          slots[i].failure = e.what();
        } catch (const std::exception& e) {
          slots[i].failure = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<FirmwareReport> reports;
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].report) {
        reports.push_back(std::move(*slots[i].report));
      } else {
        failures.push_back("skipped " + inputs[i].filename().string() + ": " + slots[i].failure);
      }
    }
    if (reports.empty()) {
      for (const std::string& f : failures) note(f);
      note("corpus: all " + std::to_string(inputs.size()) + " inputs failed");
      return kExtractionError;
    }

    CorpusReport corpus = corpus_summary(reports);
    corpus.warnings.insert(corpus.warnings.end(), failures.begin(), failures.end());

    std::vector<Occurrence> merged;
    std::sort(reports.begin(), reports.end(),
              [](const FirmwareReport& a, const FirmwareReport& b) {
                return a.firmware_id < b.firmware_id;
              });
    for (const FirmwareReport& r : reports) {
      merged.insert(merged.end(), r.occurrences.begin(), r.occurrences.end());
    }
    ImpactReport impact = impact_or_empty(merged, reports.size());

    fs::create_directories(cfg.out_dir);
    std::string corpus_text = corpus_to_json(corpus).dump(2) + "\n";
    write_text_file(fs::path(cfg.out_dir) / "corpus.json", corpus_text);
    write_text_file(fs::path(cfg.out_dir) / "impact.json", impact_to_json(impact).dump(2) + "\n");
    std::ostringstream occ_csv;
    write_occurrences_csv(occ_csv, merged);
    write_text_file(fs::path(cfg.out_dir) / "occurrences.csv", occ_csv.str());
    std::ostringstream cwes_csv;
    write_top_cwes_csv(cwes_csv, corpus.top_cwes);
    write_text_file(fs::path(cfg.out_dir) / "top_cwes.csv", cwes_csv.str());
    std::ostringstream sev_csv;
    write_top_cpes_by_severity_csv(sev_csv, corpus.top_cpes);
    write_text_file(fs::path(cfg.out_dir) / "top_cpes_by_severity.csv", sev_csv.str());
    std::ostringstream cls_csv;
    write_top_cpes_by_class_csv(cls_csv, corpus.top_cpes);
    write_text_file(fs::path(cfg.out_dir) / "top_cpes_by_class.csv", cls_csv.str());
    if (cfg.to_stdout) std::cout << corpus_text;

    for (const std::string& f : failures) note("warning: " + f);
    note("corpus: " + std::to_string(reports.size()) + "/" + std::to_string(inputs.size()) +
         " inputs analyzed, " + std::to_string(corpus.occurrence_total) + " occurrences");
    return kOk;
  });
}

int cmd_impact(const RunConfig& cfg, const std::string& occurrences_csv) {
  return run_guarded("impact", [&] {
    std::ifstream in(occurrences_csv);
    if (!in) throw IoError("cannot open " + occurrences_csv);
    std::vector<Occurrence> occurrences = read_occurrences_csv(in);

    ImpactReport impact = impact_or_empty(occurrences, std::nullopt);

    char line[160];
    std::snprintf(line, sizeof line, "%-10s %14s %14s", "severity", "before/firmware",
                  "after/firmware");
    note(line);
    for (SeverityBucket b : {SeverityBucket::Critical, SeverityBucket::High, SeverityBucket::Medium,
                             SeverityBucket::Low, SeverityBucket::None}) {
      auto get = [&](const std::map<SeverityBucket, double>& m) {
        auto it = m.find(b);
        return it == m.end() ? 0.0 : it->second;
      };
      std::snprintf(line, sizeof line, "%-10s %14.2f %14.2f", to_string(b),
                    get(impact.per_firmware_before), get(impact.per_firmware_after));
      note(line);
    }
    if (std::isinf(impact.reduction_factor)) {
      note("reduction factor: inf (all occurrences are memory-related)");
    } else {
      std::snprintf(line, sizeof line, "reduction factor: %.2f", impact.reduction_factor);
      note(line);
    }
    std::snprintf(line, sizeof line, "eliminated share: %.4f", impact.eliminated_share);
    note(line);

    fs::create_directories(cfg.out_dir);
    std::string impact_text = impact_to_json(impact).dump(2) + "\n";
    write_text_file(fs::path(cfg.out_dir) / "impact.json", impact_text);
    if (cfg.to_stdout) std::cout << impact_text;
    return kOk;
  });
}

}  // namespace firmscan::cli
