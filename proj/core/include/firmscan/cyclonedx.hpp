// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "firmscan/inventory.hpp"

namespace firmscan {

struct SbomMeta {
  std::string firmware_source_id;
  std::string firmware_digest;  // SHA-256 hex
  /// Reproducible emission: fixed timestamp, serial number derived from
  /// the firmware digest instead of a random UUID.
  bool reproducible = false;
  std::optional<std::string> timestamp_override;
};

/// CycloneDX 1.5 JSON document for an identified component set. The
/// component list is deduplicated on the formatted CPE string; keys are
/// emitted in a fixed order so reproducible runs are byte-identical.
nlohmann::ordered_json emit_cyclonedx(const std::vector<Component>& components,
                                      const SbomMeta& meta);

std::string serialize_sbom(const nlohmann::ordered_json& doc);

/// Pulls the analyzable CPE strings back out of a CycloneDX document.
/// Components without a cpe field are ignored. Throws SerializationError
/// on documents that are not CycloneDX JSON.
struct SbomComponentRef {
  std::string name;
  std::string version;
  std::string cpe;
};
struct SbomContents {
  std::string firmware_source_id;
  std::string firmware_digest;
  std::vector<SbomComponentRef> components;
};
SbomContents read_sbom(const nlohmann::json& doc);

}  // namespace firmscan
