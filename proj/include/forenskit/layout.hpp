#pragma once

// Byte-level layouts of the simulated device's storage.
//
// Partitions holding files use a flat volume table:
//
//   FSKVOL1 <partition>\n
//   @F <path> <size>\n<body bytes>\n      (repeated)
//   @END\n
//   <padding>
//
// Evidential items inside file bodies are typed markers
//   <<FSK:Kind[/label]=value>>
// where value contains neither '>' nor a newline.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forenskit/bytes.hpp"

namespace forenskit::layout {

inline constexpr std::string_view kVolumeMagic = "FSKVOL1";
inline constexpr std::string_view kMarkerOpen = "<<FSK:";
inline constexpr std::string_view kMarkerClose = ">>";
inline constexpr std::string_view kDatabaseMagic = "FSKDB1";
inline constexpr std::string_view kPackageMagic = "FSKAPK1";
inline constexpr std::string_view kEncryptedMagic = "FSKENC1";
inline constexpr std::string_view kBootloaderMagic = "FSKBL1";
inline constexpr std::string_view kFrameworkMagic = "FSKFW1";

inline constexpr std::string_view kPrivateRoot = "/data/data/";
inline constexpr std::string_view kAppRoot = "/data/app/";
inline constexpr std::string_view kSdcardRoot = "/sdcard/Android/data/";
inline constexpr std::string_view kEmulatedRoot = "/data/media/0/Android/data/";
inline constexpr std::string_view kFrameworkPath = "/system/framework/services.fjar";
inline constexpr std::string_view kSuSlotPath = "/system/xbin/su.slot";

inline constexpr std::size_t kHookSlotSize = 64;
inline constexpr std::size_t kSuSlotSize = 16;

std::string private_dir(std::string_view app_id);
std::string sdcard_dir(std::string_view app_id);
std::string emulated_dir(std::string_view app_id);
std::string package_path(std::string_view app_id);

// ---------------------------------------------------------------------------
// Volume

struct VolumeFile {
  std::string path;
  std::uint64_t offset = 0;  // body offset within the partition
  std::uint64_t length = 0;
};

class VolumeWriter {
 public:
  explicit VolumeWriter(std::string partition);
  void add(std::string_view path, ByteView body);
  void add(std::string_view path, std::string_view body) { add(path, to_bytes(body)); }
  /// Terminates the table and pads to at least `min_size` bytes, rounded up
  /// to a multiple of `align`. `filler` supplies padding bytes.
  Bytes finish(std::size_t min_size, std::size_t align, const Bytes& filler = {});
  /// Body offsets of the files added so far.
  const std::vector<VolumeFile>& files() const { return files_; }

 private:
  Bytes data_;
  std::vector<VolumeFile> files_;
};

struct VolumeListing {
  std::vector<VolumeFile> files;
  bool well_formed = false;  // saw the magic header and the @END terminator
};

VolumeListing list_files(ByteView partition);
std::optional<VolumeFile> find_file(ByteView partition, std::string_view path);

// ---------------------------------------------------------------------------
// Markers

struct Marker {
  std::string kind;
  std::string label;
  std::string value;
  std::size_t offset = 0;        // start of "<<FSK:"
  std::size_t value_offset = 0;  // start of value bytes
  std::size_t length = 0;        // whole marker
};

std::string render_marker(std::string_view kind, std::string_view label,
                          std::string_view value);
/// Every well-formed marker in `data`, in offset order. Malformed marker
/// openings are skipped.
std::vector<Marker> find_markers(ByteView data);
bool valid_marker_value(std::string_view value);
bool valid_marker_label(std::string_view label);

// ---------------------------------------------------------------------------
// Databases: named tables of string-keyed records.
//
//   FSKDB1\n
//   T <table>\n
//   R <record-id>\t<key>=<value>\t...\n

struct DbField {
  std::string value;
  std::size_t offset = 0;  // of value bytes within the database file
};

struct DbRecord {
  std::string table;
  std::string id;
  std::map<std::string, DbField> fields;
  std::size_t offset = 0;  // start of the record line
  std::size_t length = 0;
};

struct DbParseError {
  std::size_t line = 0;
  std::string message;
};

struct DbParse {
  std::vector<DbRecord> records;
  std::vector<DbParseError> errors;
};

struct DbRecordSpec {
  std::string id;
  std::vector<std::pair<std::string, std::string>> fields;
};

struct DbTableSpec {
  std::string name;
  std::vector<DbRecordSpec> records;
};

std::string render_database(const std::vector<DbTableSpec>& tables);
DbParse parse_database(ByteView file);
bool valid_db_token(std::string_view s);

// ---------------------------------------------------------------------------
// App packages: sections of marker lines plus semantics declarations.
//
//   FSKAPK1\n[code]\n...\n[heap]\n...\n[semantics]\nS <subject>\t<meaning>\n[end]\n

struct PackageSection {
  std::size_t offset = 0;  // within the package file
  std::size_t length = 0;
};

struct SemanticsLine {
  std::string subject;  // "url:<value>" or "field:<name>"
  std::string meaning;
};

struct PackageLayout {
  std::optional<PackageSection> code;
  std::optional<PackageSection> heap;
  std::vector<SemanticsLine> semantics;
};

std::string render_package(const std::vector<std::string>& code_lines,
                           const std::vector<std::string>& heap_lines,
                           const std::vector<SemanticsLine>& semantics);
/// Returns nullopt if the magic header is missing.
std::optional<PackageLayout> parse_package(ByteView file);

// ---------------------------------------------------------------------------
// Encrypted files
//
//   FSKENC1\nkeyref=<app>:<path>#<key-id>\n<ciphertext>

struct KeyRef {
  std::string app_id;
  std::string path;  // relative to the app's private directory
  std::string key_id;

  std::string to_string() const;
  bool operator==(const KeyRef&) const = default;
};

Bytes render_encrypted(const KeyRef& ref, ByteView ciphertext);

struct EncryptedLayout {
  KeyRef key_ref;
  std::size_t ciphertext_offset = 0;
  std::size_t ciphertext_length = 0;
};

std::optional<EncryptedLayout> parse_encrypted(ByteView file);

// ---------------------------------------------------------------------------
// Flash configuration regions

struct NamedRegionSpec {
  std::string_view name;       // referenced as "@name"
  std::string_view partition;
  std::size_t length;
  std::string_view factory_value;  // empty means all zero bytes
};

/// Well-known named regions and their factory contents.
const std::vector<NamedRegionSpec>& named_region_specs();
const NamedRegionSpec* find_named_region(std::string_view name);

/// Partitions whose entire content is evidential.
bool evidential_partition(std::string_view partition);

}  // namespace forenskit::layout
