// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <iostream>

#include "app_config.hpp"
#include "commands.hpp"
#include "firmscan/errors.hpp"
#include "firmscan/version.hpp"

using firmscan::cli::ClassifierMode;
using firmscan::cli::RunConfig;

namespace {

/// --config has to be known before the full parse so file values can act
/// as defaults that flags then override.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i) {
    if (std::string_view(argv[i]) == "--config") return argv[i + 1];
    if (std::string_view(argv[i]).starts_with("--config=")) {
      return std::string(argv[i] + 9);
    }
  }
  if (argc >= 2 && std::string_view(argv[argc - 1]).starts_with("--config=")) {
    return std::string(argv[argc - 1] + 9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path = prescan_config_path(argc, argv);
  try {
    if (!config_path.empty()) firmscan::cli::apply_config_file(cfg, config_path);
    firmscan::cli::apply_env(cfg);
  } catch (const firmscan::Error& e) {
    std::cerr << "firmscan: " << e.what() << "\n";
    return firmscan::cli::kConfigError;
  }

  CLI::App app{"firmware SBOM and memory-safety vulnerability analysis"};
  app.set_version_flag("--version", std::string(firmscan::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_dummy;
  app.add_option("--config", config_dummy, "flat key=value configuration file");
  app.add_option("--index", cfg.index_path, "vulnerability index file");
  app.add_option("--cache-dir", cfg.cache_dir, "extraction cache directory");
  app.add_option("--out", cfg.out_dir, "output directory");
  auto* offline_flag = app.add_flag("--offline", "no network access (default)");
  auto* online_flag = app.add_flag("--online", "allow network access (feed fetch)");
  std::string classifier = cfg.classifier_mode == ClassifierMode::Rule ? "rule" : "rule-then-llm";
  app.add_option("--classifier", classifier, "rule | rule-then-llm")
      ->check(CLI::IsMember({"rule", "rule-then-llm"}));
  app.add_option("--jobs", cfg.parallelism, "parallel workers (default: hardware threads)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--reproducible", cfg.reproducible,
               "fixed timestamps and serial numbers; byte-stable outputs");
  app.add_flag("--stdout", cfg.to_stdout, "also write machine output to stdout");
  std::string llm_endpoint;
  app.add_option("--llm-endpoint", llm_endpoint, "remote classifier endpoint URL");
  app.add_option("--rule-table", cfg.rule_table_path, "CWE memory-class rule table (JSON)");
  app.add_option("--known-components", cfg.known_components_path,
                 "component identification pattern table (JSON)");

  // feed ingest / feed fetch
  auto* feed = app.add_subcommand("feed", "vulnerability feed management");
  feed->require_subcommand(1);
  auto* ingest = feed->add_subcommand("ingest", "ingest NVD 2.0 JSON feed files into an index");
  std::vector<std::string> feed_paths;
  ingest->add_option("feeds", feed_paths, "NVD API 2.0 JSON documents")->required();
  auto* fetch = feed->add_subcommand("fetch", "fetch records from the NVD API (needs --online)");
  std::string fetch_cpe;
  int fetch_pages = 10;
  fetch->add_option("--cpe", fetch_cpe, "restrict to one CPE name");
  fetch->add_option("--max-pages", fetch_pages, "page limit (2000 records each)");

  auto* scan = app.add_subcommand("scan", "extract a firmware image and emit its SBOM");
  std::string scan_image;
  scan->add_option("image", scan_image, "firmware image, tar archive or pre-extracted directory")
      ->required();

  auto* analyze = app.add_subcommand("analyze", "match an SBOM or image against the index");
  std::string analyze_input;
  analyze->add_option("input", analyze_input, "CycloneDX SBOM, image or directory")->required();

  auto* corpus = app.add_subcommand("corpus", "batch scan+analyze over a directory");
  std::string corpus_dir;
  corpus->add_option("dir", corpus_dir, "directory of firmware images / SBOMs")->required();

  auto* impact = app.add_subcommand("impact", "memory-protection impact from an occurrence ledger");
  std::string impact_csv;
  impact->add_option("occurrences", impact_csv, "occurrences.csv from analyze/corpus")->required();

  CLI11_PARSE(app, argc, argv);

  if (*online_flag) cfg.offline = false;
  if (*offline_flag) cfg.offline = true;
  cfg.classifier_mode = classifier == "rule" ? ClassifierMode::Rule : ClassifierMode::RuleThenLlm;
  if (!llm_endpoint.empty()) cfg.llm_endpoint = llm_endpoint;
  cfg.nvd_feed_paths = feed_paths;

  if (ingest->parsed()) return firmscan::cli::cmd_feed_ingest(cfg);
  if (fetch->parsed()) return firmscan::cli::cmd_feed_fetch(cfg, fetch_cpe, fetch_pages);
  if (scan->parsed()) return firmscan::cli::cmd_scan(cfg, scan_image);
  if (analyze->parsed()) return firmscan::cli::cmd_analyze(cfg, analyze_input);
  if (corpus->parsed()) return firmscan::cli::cmd_corpus(cfg, corpus_dir);
  if (impact->parsed()) return firmscan::cli::cmd_impact(cfg, impact_csv);
  return firmscan::cli::kConfigError;
}
