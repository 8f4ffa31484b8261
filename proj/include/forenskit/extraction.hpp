#pragma once

// Examination and analysis procedures over collected images and the device
// accounts store. All functions are read-only.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "forenskit/artifact.hpp"
#include "forenskit/audit.hpp"
#include "forenskit/device.hpp"
#include "forenskit/workstation.hpp"

namespace forenskit::extraction {

enum class Method : std::uint8_t { KeywordSearch, PathWalk, TableScan, RegexScan };

std::optional<Method> parse_method(std::string_view name);
std::string_view to_string(Method method);

enum class AnalysisMode : std::uint8_t { Static, Dynamic };

std::optional<AnalysisMode> parse_mode(std::string_view name);

struct Finding {
  std::string app_id;
  std::string message;
};

struct AppSemantics {
  std::string app_id;
  std::string subject;  // url:<value> or field:<name>
  std::string meaning;
};

struct ExaminationResult {
  std::vector<Artifact> artifacts;
  std::vector<FileMetadataRecord> metadata;
  std::vector<AppSemantics> semantics;
  std::vector<Finding> findings;
  /// The device has no external storage area to examine.
  bool no_external_storage = false;
};

/// App ids are examined one at a time; "*" selects every app in the image.
ExaminationResult examine_private_storage(const WorkstationItem& image, std::string_view app_id);
/// `image` is null when the device has no external storage to collect.
ExaminationResult examine_external_storage(const WorkstationItem* image, std::string_view app_id);
ExaminationResult examine_databases(const WorkstationItem& image, std::string_view app_id);
/// Throws Error(MissingSection) when the package or the requested section
/// is absent (for an explicit app id).
ExaminationResult analyze_app(const WorkstationItem& image, std::string_view app_id,
                              AnalysisMode mode);

/// Credential artifacts for every non-empty account field. Throws
/// Error(AccessDenied) unless `trace` holds a completed framework Inject
/// and a completed Modify of the signature check, and the check is off.
std::vector<Artifact> extract_accounts(const Device& device, const std::vector<AuditRecord>& trace);
/// Canonical serialization of the accounts store used for Transmit.
Bytes accounts_blob(const std::vector<AccountRecord>& accounts);

/// Keeps the artifacts the method selects. Throws Error(InvalidArgument) for
/// a malformed regex.
std::vector<Artifact> apply_method(std::vector<Artifact> artifacts, Method method,
                                   const std::string& pattern);

/// Upgrades matching Unknown artifacts to Known. Returns the number changed.
std::size_t apply_semantics(std::vector<Artifact>& artifacts,
                            const std::vector<AppSemantics>& semantics);

/// Re-reads the bytes an artifact's provenance points at.
Bytes dereference(const Provenance& provenance, const Workstation& workstation,
                  const Device& device);

/// Artifact for plaintext produced by decrypting `source` into workstation
/// item `item_id`.
Artifact decrypted_artifact(const Artifact& source, const std::string& item_id,
                            const Bytes& plaintext);

nlohmann::json to_json(const Artifact& a);
Artifact artifact_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FileMetadataRecord& r);
FileMetadataRecord metadata_from_json(const nlohmann::json& j);

}  // namespace forenskit::extraction
