// SPDX-License-Identifier: Apache-2.0
#include "firmscan/inventory.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <regex>

#include "embedded/known_components.hpp"
#include "firmscan/errors.hpp"

namespace firmscan {

const char* to_string(EvidenceSource s) {
  switch (s) {
    case EvidenceSource::OpkgStatus:
      return "opkg-status";
    case EvidenceSource::VersionString:
      return "version-string";
    case EvidenceSource::SharedLibraryName:
      return "shared-library-name";
    case EvidenceSource::KnownPath:
      return "known-path";
  }
  return "?";
}

namespace {

int precedence(EvidenceSource s) {
  switch (s) {
    case EvidenceSource::OpkgStatus:
      return 0;
    case EvidenceSource::VersionString:
      return 1;
    case EvidenceSource::SharedLibraryName:
      return 2;
    case EvidenceSource::KnownPath:
      return 3;
  }
  return 4;
}

std::string clip_excerpt(std::string_view s) {
  std::string out(s.substr(0, 120));
  for (char& c : out) {
    if (static_cast<unsigned char>(c) < 0x20) c = ' ';
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

OpkgStatusResult parse_opkg_status(std::string_view text) {
  OpkgStatusResult result;
  std::string pkg, ver, arch;
  bool in_stanza = false;

  auto flush = [&] {
    if (!in_stanza) return;
    if (!pkg.empty() && !ver.empty()) {
      OpkgPackage p{pkg, ver, arch.empty() ? std::nullopt : std::make_optional(arch)};
      result.packages.push_back(std::move(p));
    } else {
      ++result.skipped;
    }
    pkg.clear();
    ver.clear();
    arch.clear();
    in_stanza = false;
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush();
    } else if (line.front() == ' ' || line.front() == '\t') {
      // continuation line: irrelevant for the fields we extract
      in_stanza = true;
    } else {
      in_stanza = true;
      std::size_t colon = line.find(':');
      if (colon != std::string_view::npos) {
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "Package") {
          pkg = value;
        } else if (key == "Version") {
          ver = value;
        } else if (key == "Architecture") {
          arch = value;
        }
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  flush();
  return result;
}

std::string normalize_version(std::string_view raw) {
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] == '-' && std::isdigit(static_cast<unsigned char>(raw[i - 1]))) {
      return std::string(raw.substr(0, i));
    }
  }
  return std::string(raw);
}

// ---- known-components table -------------------------------------------

KnownComponentsTable KnownComponentsTable::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("known-components table: invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError("known-components table: expected a JSON array");

  KnownComponentsTable t;
  for (const auto& item : doc) {
    Rule r;
    r.pattern = item.at("pattern").get<std::string>();
    r.vendor = item.at("vendor").get<std::string>();
    r.product = item.at("product").get<std::string>();
    r.version_group = item.value("version_group", 0);
    std::string match = item.value("match", "path");
    if (match == "path") {
      r.match = Rule::Match::Path;
    } else if (match == "content") {
      r.match = Rule::Match::Content;
    } else if (match == "package") {
      r.match = Rule::Match::Package;
    } else {
      throw ConfigError("known-components table: unknown match kind " + match);
    }
    try {
      std::regex probe(r.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw ConfigError("known-components table: bad pattern \"" + r.pattern + "\": " + e.what());
    }
    t.rules_.push_back(std::move(r));
  }
  return t;
}

KnownComponentsTable KnownComponentsTable::builtin() {
  return from_json_text(embedded::kKnownComponentsJson);
}

KnownComponentsTable KnownComponentsTable::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open known-components table: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

// ---- identification ----------------------------------------------------

namespace {

struct Candidate {
  std::string vendor;
  std::string product;
  std::string version_raw;
  Evidence evidence;
};

bool is_opkg_status_path(std::string_view path) {
  return path == "usr/lib/opkg/status" || path == "var/lib/opkg/status" ||
         path == "usr/lib/opkg/status.d" || path.ends_with("/lib/opkg/status");
}

void scan_opkg(const FilesystemTree& tree, const ContentReader& reader,
               const KnownComponentsTable& table, std::vector<std::regex>& regexes,
               std::vector<Candidate>& out) {
  for (const FsEntry& e : tree.entries()) {
    if (e.kind != FsEntryKind::File || !is_opkg_status_path(e.path)) continue;
    const Bytes* content = reader(e.content_digest);
    if (content == nullptr) continue;
    OpkgStatusResult parsed = parse_opkg_status(string_of(ByteView(*content)));
    for (const OpkgPackage& p : parsed.packages) {
      std::string vendor = p.name;
      std::string product = p.name;
      for (std::size_t i = 0; i < table.rules().size(); ++i) {
        const auto& rule = table.rules()[i];
        if (rule.match != KnownComponentsTable::Rule::Match::Package) continue;
        if (std::regex_match(p.name, regexes[i])) {
          vendor = rule.vendor;
          product = rule.product;
          break;
        }
      }
      out.push_back({vendor, product, p.version,
                     {EvidenceSource::OpkgStatus, e.path,
                      clip_excerpt("Package: " + p.name + " Version: " + p.version)}});
    }
  }
}

void scan_paths(const FilesystemTree& tree, const KnownComponentsTable& table,
                std::vector<std::regex>& regexes, std::vector<Candidate>& out) {
  for (const FsEntry& e : tree.entries()) {
    if (e.kind == FsEntryKind::Dir) continue;
    for (std::size_t i = 0; i < table.rules().size(); ++i) {
      const auto& rule = table.rules()[i];
      if (rule.match != KnownComponentsTable::Rule::Match::Path) continue;
      std::smatch m;
      if (!std::regex_search(e.path, m, regexes[i])) continue;
      std::string version;
      if (rule.version_group > 0 && rule.version_group < static_cast<int>(m.size())) {
        version = m[rule.version_group].str();
      }
      std::string_view matched(e.path.data() + m.position(0), m.length(0));
      EvidenceSource src = matched.find(".so") != std::string_view::npos
                               ? EvidenceSource::SharedLibraryName
                               : EvidenceSource::KnownPath;
      out.push_back({rule.vendor, rule.product, version, {src, e.path, clip_excerpt(matched)}});
    }
  }
}

/// Printable-ASCII runs of at least `min_run` chars, newline-joined. The
/// same transformation `strings(1)` would apply.
std::string extract_strings(ByteView data, std::size_t min_run) {
  std::string out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    if (end - start >= min_run) {
      out.append(reinterpret_cast<const char*>(data.data() + start), end - start);
      out.push_back('\n');
    }
  };
  for (; i < data.size(); ++i) {
    if (!is_printable_ascii(data[i])) {
      flush(i);
      start = i + 1;
    }
  }
  flush(i);
  return out;
}

void scan_contents(const FilesystemTree& tree, const ContentReader& reader,
                   const KnownComponentsTable& table, std::vector<std::regex>& regexes,
                   const InventoryOptions& opts, std::vector<Candidate>& out) {
  for (const FsEntry& e : tree.entries()) {
    if (e.kind != FsEntryKind::File || e.size > opts.max_content_scan_bytes) continue;
    const Bytes* content = reader(e.content_digest);
    if (content == nullptr) continue;
    std::string text = extract_strings(ByteView(*content), opts.min_string_run);
    for (std::size_t i = 0; i < table.rules().size(); ++i) {
      const auto& rule = table.rules()[i];
      if (rule.match != KnownComponentsTable::Rule::Match::Content) continue;
      std::smatch m;
      if (!std::regex_search(text, m, regexes[i])) continue;
      std::string version;
      if (rule.version_group > 0 && rule.version_group < static_cast<int>(m.size())) {
        version = m[rule.version_group].str();
      }
      out.push_back({rule.vendor, rule.product, version,
                     {EvidenceSource::VersionString, e.path, clip_excerpt(m[0].str())}});
    }
  }
}

}  // namespace

std::vector<Component> identify_components(const FilesystemTree& tree,
                                           const ContentReader& reader,
                                           const KnownComponentsTable& table,
                                           const InventoryOptions& opts) {
  std::vector<std::regex> regexes;
  regexes.reserve(table.rules().size());
  for (const auto& r : table.rules()) {
    regexes.emplace_back(r.pattern, std::regex::ECMAScript);
  }

  std::vector<Candidate> candidates;
  scan_opkg(tree, reader, table, regexes, candidates);
  scan_contents(tree, reader, table, regexes, opts, candidates);
  scan_paths(tree, table, regexes, candidates);

  // Deterministic dedup: group by (vendor, product); the representative
  // version comes from the highest-precedence evidence (ties broken by
  // path, then version string).
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.product != b.product) return a.product < b.product;
    if (a.vendor != b.vendor) return a.vendor < b.vendor;
    int pa = precedence(a.evidence.source);
    int pb = precedence(b.evidence.source);
    if (pa != pb) return pa < pb;
    if (a.evidence.path != b.evidence.path) return a.evidence.path < b.evidence.path;
    return a.version_raw < b.version_raw;
  });

  std::vector<Component> components;
  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t j = i;
    while (j < candidates.size() && candidates[j].vendor == candidates[i].vendor &&
           candidates[j].product == candidates[i].product) {
      ++j;
    }
    const Candidate& best = candidates[i];
    Component c;
    c.display_name = best.product;
    c.version_raw = best.version_raw;
    if (c.version_raw.empty()) {
      // A known-path hit proves presence but not version; borrow the
      // version from the next-best evidence that has one.
      for (std::size_t k = i + 1; k < j; ++k) {
        if (!candidates[k].version_raw.empty()) {
          c.version_raw = candidates[k].version_raw;
          break;
        }
      }
    }
    c.cpe = to_cpe(best.vendor, best.product, normalize_version(c.version_raw));
    for (std::size_t k = i; k < j; ++k) {
      if (std::find(c.evidence.begin(), c.evidence.end(), candidates[k].evidence) ==
          c.evidence.end()) {
        c.evidence.push_back(candidates[k].evidence);
      }
    }
    components.push_back(std::move(c));
    i = j;
  }
  return components;
}

}  // namespace firmscan
