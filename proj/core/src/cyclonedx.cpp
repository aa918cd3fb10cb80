// SPDX-License-Identifier: Apache-2.0
#include "firmscan/cyclonedx.hpp"

#include <chrono>
#include <ctime>
#include <random>
#include <set>

#include "firmscan/errors.hpp"
#include "firmscan/hash.hpp"
#include "firmscan/version.hpp"

namespace firmscan {

namespace {

std::string hex_bytes_to_uuid(const std::string& hex32) {
  // Shape 16 bytes of hex into an RFC-4122 v4 UUID string.
  std::string h = hex32.substr(0, 32);
  h[12] = '4';                                      // version nibble
  static const char* variants = "89ab";
  h[16] = variants[static_cast<unsigned char>(h[16]) % 4];  // variant nibble
  return h.substr(0, 8) + "-" + h.substr(8, 4) + "-" + h.substr(12, 4) + "-" + h.substr(16, 4) +
         "-" + h.substr(20, 12);
}

std::string make_serial_number(const SbomMeta& meta) {
  if (meta.reproducible) {
    return "urn:uuid:" + hex_bytes_to_uuid(sha256_hex("sbom-serial:" + meta.firmware_digest));
  }
  std::random_device rd;
  Bytes raw(16);
  for (auto& b : raw) b = static_cast<std::uint8_t>(rd());
  return "urn:uuid:" + hex_bytes_to_uuid(to_hex(ByteView(raw)));
}

std::string utc_now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::ordered_json emit_cyclonedx(const std::vector<Component>& components,
                                      const SbomMeta& meta) {
  std::string timestamp = meta.timestamp_override
                              ? *meta.timestamp_override
                              : (meta.reproducible ? "1970-01-01T00:00:00Z" : utc_now_iso8601());

  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  std::set<std::string> seen_cpes;
  for (const Component& c : components) {
    std::string cpe = format_cpe(c.cpe);
    if (!seen_cpes.insert(cpe).second) continue;  // dedup on cpe string

    nlohmann::ordered_json jc;
    jc["type"] = "library";
    jc["name"] = c.display_name;
    if (c.cpe.version.is_value()) jc["version"] = c.cpe.version.str();
    jc["cpe"] = cpe;

    nlohmann::ordered_json props = nlohmann::ordered_json::array();
    for (const Evidence& e : c.evidence) {
      props.push_back({{"name", std::string("firmscan:evidence:") + to_string(e.source)},
                       {"value", display_lossy(e.path) +
                                     (e.excerpt.empty() ? "" : " | " + e.excerpt)}});
    }
    if (!c.version_raw.empty() && c.cpe.version.is_value() &&
        c.version_raw != c.cpe.version.str()) {
      props.push_back({{"name", "firmscan:version-raw"}, {"value", c.version_raw}});
    }
    if (!props.empty()) jc["properties"] = std::move(props);
    comps.push_back(std::move(jc));
  }

  nlohmann::ordered_json doc;
  doc["bomFormat"] = "CycloneDX";
  doc["specVersion"] = "1.5";
  doc["serialNumber"] = make_serial_number(meta);
  doc["version"] = 1;
  doc["metadata"] = {
      {"timestamp", timestamp},
      {"tools", nlohmann::ordered_json::array(
                    {{{"vendor", "firmscan"}, {"name", kToolName}, {"version", kToolVersion}}})},
      {"component",
       {{"type", "firmware"},
        {"name", meta.firmware_source_id.empty() ? "firmware" : meta.firmware_source_id},
        {"hashes", nlohmann::ordered_json::array(
                       {{{"alg", "SHA-256"}, {"content", meta.firmware_digest}}})}}},
  };
  doc["components"] = std::move(comps);
  return doc;
}

std::string serialize_sbom(const nlohmann::ordered_json& doc) {
  return doc.dump(2) + "\n";
}

SbomContents read_sbom(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("bomFormat", "") != "CycloneDX") {
    throw SerializationError("not a CycloneDX document (bomFormat missing)");
  }
  SbomContents out;
  if (doc.contains("metadata") && doc["metadata"].contains("component")) {
    const auto& mc = doc["metadata"]["component"];
    out.firmware_source_id = mc.value("name", "");
    if (mc.contains("hashes")) {
      for (const auto& h : mc["hashes"]) {
        if (h.value("alg", "") == "SHA-256") {
          out.firmware_digest = h.value("content", "");
          break;
        }
      }
    }
  }
  if (doc.contains("components")) {
    if (!doc["components"].is_array()) {
      throw SerializationError("CycloneDX components is not an array");
    }
    for (const auto& jc : doc["components"]) {
      std::string cpe = jc.value("cpe", "");
      if (cpe.empty()) continue;
      out.components.push_back({jc.value("name", ""), jc.value("version", ""), cpe});
    }
  }
  return out;
}

}  // namespace firmscan
