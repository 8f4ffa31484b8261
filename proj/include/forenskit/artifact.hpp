#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "forenskit/bytes.hpp"
#include "forenskit/layout.hpp"

namespace forenskit {

enum class ArtifactKind : std::uint8_t {
  PII,
  AuthToken,
  EncryptionKey,
  CachedData,
  FileMetadataRecord,
  Credential,
  URL,
  AppSecret,
};

enum class MeaningStatus : std::uint8_t { Known, Unknown };

std::string_view to_string(ArtifactKind kind);
std::optional<ArtifactKind> parse_artifact_kind(std::string_view name);
std::string_view to_string(MeaningStatus status);

/// Where an artifact's value can be re-read from: a byte range of a
/// workstation item, or a record of a device store.
struct Provenance {
  enum class Form : std::uint8_t { ImageRange, StoreRecord };
  Form form = Form::ImageRange;
  std::string source;  // workstation item id, or store name ("accounts")
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::string record;  // "<index>/<field>" for store records

  bool operator==(const Provenance&) const = default;
};

struct Artifact {
  ArtifactKind kind = ArtifactKind::PII;
  std::string app_id;
  std::string label;
  Bytes value;
  Provenance provenance;
  MeaningStatus meaning = MeaningStatus::Known;
  std::string meaning_note;
  /// private, external, database, accounts, package-code, package-heap, decrypted
  std::string origin;
  std::string path;   // absolute file path inside the image, when file-backed
  std::string field;  // database field name, for field-derived artifacts
  bool encrypted = false;
  std::optional<layout::KeyRef> key_hint;

  bool operator==(const Artifact&) const = default;
};

struct FileMetadataRecord {
  std::string app_id;
  std::string database;
  std::string table;
  std::string record_id;
  std::string filename;
  std::optional<std::string> paths;
  /// access, modification, deletion, synchronization, creation
  std::map<std::string, std::string> timestamps;
  std::optional<std::string> file_type;
  std::optional<std::string> sharing;
  std::optional<std::string> ownership;
  std::optional<std::string> permissions;
  std::optional<std::string> encryption;
  std::optional<std::string> file_hash;
  std::optional<std::string> json_blob;
  std::optional<std::string> file_url;
  std::optional<std::string> url_purpose;
  std::map<std::string, std::string> other;
  Provenance provenance;

  bool operator==(const FileMetadataRecord&) const = default;
};

}  // namespace forenskit
