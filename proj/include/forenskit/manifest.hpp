#pragma once

// Fixture manifest: the seeded ground truth a simulated device is built from
// and the oracle extraction results are checked against. The JSON schema is
// documented in docs/manifest.md.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace forenskit {

/// Evidential item planted into a file as a typed marker.
struct PlantedItem {
  std::string kind;  // PII, AuthToken, EncryptionKey, URL, AppSecret, Credential
  std::string label;
  std::string value;

  bool operator==(const PlantedItem&) const = default;
};

struct FileEntry {
  std::string path;  // relative to the app's storage root
  std::string content;
  std::vector<PlantedItem> planted;

  bool operator==(const FileEntry&) const = default;
};

struct KeyLocation {
  std::string app_id;
  std::string path;  // private file holding the key

  bool operator==(const KeyLocation&) const = default;
};

struct EncryptedFile {
  std::string path;  // relative to the app's external root
  std::string plaintext;
  std::string key;
  std::string key_id;
  KeyLocation key_location;

  bool operator==(const EncryptedFile&) const = default;
};

struct RecordFixture {
  std::string id;
  std::vector<std::pair<std::string, std::string>> fields;  // rendered in this order; JSON sorts by key

  bool operator==(const RecordFixture&) const = default;
};

struct TableFixture {
  std::string name;
  std::vector<RecordFixture> records;

  bool operator==(const TableFixture&) const = default;
};

struct DatabaseFixture {
  std::string name;
  std::vector<TableFixture> tables;

  bool operator==(const DatabaseFixture&) const = default;
};

struct SemanticsEntry {
  std::string subject;  // "url:<value>" or "field:<db field>"
  std::string meaning;

  bool operator==(const SemanticsEntry&) const = default;
};

struct PackageFixture {
  std::vector<PlantedItem> code;
  std::vector<PlantedItem> heap;
  std::vector<SemanticsEntry> semantics;

  bool operator==(const PackageFixture&) const = default;
};

struct AppFixture {
  std::string app_id;
  std::vector<FileEntry> private_files;
  std::vector<FileEntry> external_files;
  std::vector<EncryptedFile> encrypted_files;
  std::vector<DatabaseFixture> databases;
  std::optional<PackageFixture> package;

  bool operator==(const AppFixture&) const = default;
};

struct AccountRecord {
  std::string app_id;
  std::string username;
  std::optional<std::string> password;
  std::optional<std::string> email;
  std::optional<std::string> refresh_token;
  std::optional<std::string> access_token;
  std::uint64_t timestamp = 0;

  bool operator==(const AccountRecord&) const = default;
};

struct PiiEntry {
  std::string app_id;
  std::string label;  // username, email, geolocation
  std::string value;
  std::string path;   // private file the value is planted in

  bool operator==(const PiiEntry&) const = default;
};

struct ChannelFixture {
  std::string name;
  std::vector<std::string> messages;

  bool operator==(const ChannelFixture&) const = default;
};

struct FixtureManifest {
  std::vector<AppFixture> apps;
  std::vector<AccountRecord> accounts;
  std::vector<PiiEntry> pii;
  std::vector<ChannelFixture> channels;
  bool sdcard_present = false;

  bool operator==(const FixtureManifest&) const = default;
};

/// Database fields with structured meaning. Anything else is kept verbatim.
namespace dbfield {
inline constexpr const char* kFilename = "filename";
inline constexpr const char* kPaths = "paths";
inline constexpr const char* kAccess = "ts_access";
inline constexpr const char* kModification = "ts_modification";
inline constexpr const char* kDeletion = "ts_deletion";
inline constexpr const char* kSync = "ts_sync";
inline constexpr const char* kCreation = "ts_creation";
inline constexpr const char* kFileType = "file_type";
inline constexpr const char* kSharing = "sharing";
inline constexpr const char* kOwnership = "ownership";
inline constexpr const char* kPermissions = "permissions";
inline constexpr const char* kEncryption = "encryption";
inline constexpr const char* kFileHash = "file_hash";
inline constexpr const char* kJson = "json";
inline constexpr const char* kFileUrl = "file_url";
inline constexpr const char* kUrlPurpose = "url_purpose";
inline constexpr const char* kUser = "user";
inline constexpr const char* kEmail = "email";
inline constexpr const char* kGeo = "geo";
}  // namespace dbfield

/// Throws ManifestError naming the offending entry.
FixtureManifest manifest_from_json(const nlohmann::json& j);
FixtureManifest load_manifest(const std::string& path);
nlohmann::json manifest_to_json(const FixtureManifest& m);

/// Checks cross-entry invariants; throws ManifestError.
void validate_manifest(const FixtureManifest& m);

}  // namespace forenskit
