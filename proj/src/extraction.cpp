#include "forenskit/extraction.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "forenskit/error.hpp"
#include "forenskit/layout.hpp"
#include "forenskit/scan.hpp"

namespace forenskit {

namespace {
constexpr std::array<std::string_view, 8> kArtifactKindNames{
    "PII", "AuthToken", "EncryptionKey", "CachedData", "FileMetadataRecord",
    "Credential", "URL", "AppSecret"};
}  // namespace

std::string_view to_string(ArtifactKind kind) {
  return kArtifactKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ArtifactKind> parse_artifact_kind(std::string_view name) {
  for (std::size_t i = 0; i < kArtifactKindNames.size(); ++i)
    if (kArtifactKindNames[i] == name) return static_cast<ArtifactKind>(i);
  return std::nullopt;
}

std::string_view to_string(MeaningStatus status) {
  return status == MeaningStatus::Known ? "known" : "unknown";
}

namespace extraction {

using nlohmann::json;
using forenskit::to_string;

namespace {

bool valid_utf8(const std::string& s) {
  try {
    (void)json(s).dump();
    return true;
  } catch (const json::exception&) {
    return false;
  }
}

struct FileView {
  std::string path;
  std::uint64_t offset;
  ByteView body;
};

std::vector<FileView> files_under(const WorkstationItem& image, std::string_view prefix) {
  std::vector<FileView> out;
  for (const auto& f : layout::list_files(image.data).files)
    if (std::string_view(f.path).substr(0, prefix.size()) == prefix)
      out.push_back({f.path, f.offset, ByteView(image.data).subspan(f.offset, f.length)});
  return out;
}

/// App ids that have at least one file below `root`.
std::vector<std::string> apps_under(const WorkstationItem& image, std::string_view root) {
  std::set<std::string> ids;
  for (const auto& f : files_under(image, root)) {
    std::string_view rest = std::string_view(f.path).substr(root.size());
    auto slash = rest.find('/');
    if (slash != std::string_view::npos && slash > 0) ids.insert(std::string(rest.substr(0, slash)));
  }
  return {ids.begin(), ids.end()};
}

std::vector<std::string> select_apps(const WorkstationItem& image, std::string_view root,
                                     std::string_view app_id) {
  if (app_id == "*") return apps_under(image, root);
  return {std::string(app_id)};
}

MeaningStatus default_meaning(ArtifactKind kind) {
  return kind == ArtifactKind::URL ? MeaningStatus::Unknown : MeaningStatus::Known;
}

Provenance range(const WorkstationItem& image, std::uint64_t offset, std::uint64_t length) {
  return {Provenance::Form::ImageRange, image.id, offset, length, {}};
}

void marker_artifacts(const WorkstationItem& image, const std::string& app,
                      const std::string& origin, const std::string& path, std::uint64_t base,
                      ByteView body, ExaminationResult& out) {
  for (const layout::Marker& m : layout::find_markers(body)) {
    auto kind = parse_artifact_kind(m.kind);
    if (!kind || *kind == ArtifactKind::CachedData || *kind == ArtifactKind::FileMetadataRecord) {
      out.findings.push_back({app, "unrecognised marker kind '" + m.kind + "' in " + path});
      continue;
    }
    Artifact a;
    a.kind = *kind;
    a.app_id = app;
    a.label = m.label;
    a.value = to_bytes(m.value);
    a.provenance = range(image, base + m.value_offset, m.value.size());
    a.meaning = default_meaning(*kind);
    a.origin = origin;
    a.path = path;
    out.artifacts.push_back(std::move(a));
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::map<std::string, std::string>& timestamp_names() {
  static const std::map<std::string, std::string> names{
      {dbfield::kAccess, "access"},
      {dbfield::kModification, "modification"},
      {dbfield::kDeletion, "deletion"},
      {dbfield::kSync, "synchronization"},
      {dbfield::kCreation, "creation"}};
  return names;
}

}  // namespace

std::optional<Method> parse_method(std::string_view name) {
  if (name == "keyword-search") return Method::KeywordSearch;
  if (name == "path-walk") return Method::PathWalk;
  if (name == "table-scan") return Method::TableScan;
  if (name == "regex-scan") return Method::RegexScan;
  return std::nullopt;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::KeywordSearch: return "keyword-search";
    case Method::PathWalk: return "path-walk";
    case Method::TableScan: return "table-scan";
    case Method::RegexScan: return "regex-scan";
  }
  return "?";
}

std::optional<AnalysisMode> parse_mode(std::string_view name) {
  if (name == "static") return AnalysisMode::Static;
  if (name == "dynamic") return AnalysisMode::Dynamic;
  return std::nullopt;
}

ExaminationResult examine_private_storage(const WorkstationItem& image, std::string_view app_id) {
  ExaminationResult out;
  for (const std::string& app : select_apps(image, layout::kPrivateRoot, app_id)) {
    const std::string root = layout::private_dir(app);
    auto files = files_under(image, root);
    if (files.empty()) out.findings.push_back({app, "app has no private storage in " + image.id});
    for (const FileView& f : files) {
      std::string_view rel = std::string_view(f.path).substr(root.size());
      if (rel.substr(0, 10) == "databases/") continue;
      if (rel.substr(0, 6) == "cache/") {
        Artifact a;
        a.kind = ArtifactKind::CachedData;
        a.app_id = app;
        a.label = std::string(rel);
        a.value = Bytes(f.body.begin(), f.body.end());
        a.provenance = range(image, f.offset, f.body.size());
        a.origin = "private";
        a.path = f.path;
        out.artifacts.push_back(std::move(a));
        continue;
      }
      marker_artifacts(image, app, "private", f.path, f.offset, f.body, out);
    }
  }
  return out;
}

ExaminationResult examine_external_storage(const WorkstationItem* image, std::string_view app_id) {
  ExaminationResult out;
  if (!image) {
    out.no_external_storage = true;
    return out;
  }
  const bool sdcard = image->label == "sdcard";
  const std::string_view base = sdcard ? layout::kSdcardRoot : layout::kEmulatedRoot;
  for (const std::string& app : select_apps(*image, base, app_id)) {
    const std::string root = sdcard ? layout::sdcard_dir(app) : layout::emulated_dir(app);
    for (const FileView& f : files_under(*image, root)) {
      Artifact a;
      a.kind = ArtifactKind::CachedData;
      a.app_id = app;
      a.label = f.path.substr(root.size());
      a.origin = "external";
      a.path = f.path;
      if (auto enc = layout::parse_encrypted(f.body)) {
        auto cipher = f.body.subspan(enc->ciphertext_offset, enc->ciphertext_length);
        a.value = Bytes(cipher.begin(), cipher.end());
        a.provenance = range(*image, f.offset + enc->ciphertext_offset, enc->ciphertext_length);
        a.encrypted = true;
        a.key_hint = enc->key_ref;
      } else {
        a.value = Bytes(f.body.begin(), f.body.end());
        a.provenance = range(*image, f.offset, f.body.size());
      }
      out.artifacts.push_back(std::move(a));
    }
  }
  return out;
}

ExaminationResult examine_databases(const WorkstationItem& image, std::string_view app_id) {
  ExaminationResult out;
  for (const std::string& app : select_apps(image, layout::kPrivateRoot, app_id)) {
    const std::string root = layout::private_dir(app) + "databases/";
    for (const FileView& f : files_under(image, root)) {
      std::string name = f.path.substr(root.size());
      if (name.size() < 4 || name.substr(name.size() - 4) != ".fdb") continue;
      name.resize(name.size() - 4);
      layout::DbParse parsed = layout::parse_database(f.body);
      for (const auto& e : parsed.errors)
        out.findings.push_back({app, f.path + " line " + std::to_string(e.line) + ": " + e.message});

      for (const layout::DbRecord& rec : parsed.records) {
        FileMetadataRecord md;
        md.app_id = app;
        md.database = name;
        md.table = rec.table;
        md.record_id = rec.id;
        md.provenance = range(image, f.offset + rec.offset, rec.length);
        auto opt = [&](const char* key) -> std::optional<std::string> {
          auto it = rec.fields.find(key);
          if (it == rec.fields.end()) return std::nullopt;
          return it->second.value;
        };
        for (const auto& [key, field] : rec.fields) {
          if (key == dbfield::kFilename) md.filename = field.value;
          else if (auto ts = timestamp_names().find(key); ts != timestamp_names().end())
            md.timestamps[ts->second] = field.value;
          else if (key == dbfield::kPaths) md.paths = field.value;
          else if (key == dbfield::kFileType) md.file_type = field.value;
          else if (key == dbfield::kSharing) md.sharing = field.value;
          else if (key == dbfield::kOwnership) md.ownership = field.value;
          else if (key == dbfield::kPermissions) md.permissions = field.value;
          else if (key == dbfield::kEncryption) md.encryption = field.value;
          else if (key == dbfield::kFileHash) md.file_hash = field.value;
          else if (key == dbfield::kJson) md.json_blob = field.value;
          else if (key == dbfield::kFileUrl) md.file_url = field.value;
          else if (key == dbfield::kUrlPurpose) md.url_purpose = field.value;
          else md.other[key] = field.value;
        }
        if (md.filename.empty() || md.timestamps.empty()) {
          out.findings.push_back({app, f.path + ": record " + rec.table + "/" + rec.id +
                                           " lacks a filename or timestamp"});
        }

        const std::string label = name + "/" + rec.table + "/" + rec.id;
        Artifact rec_artifact;
        rec_artifact.kind = ArtifactKind::FileMetadataRecord;
        rec_artifact.app_id = app;
        rec_artifact.label = label;
        auto line = f.body.subspan(rec.offset, rec.length);
        rec_artifact.value = Bytes(line.begin(), line.end());
        rec_artifact.provenance = md.provenance;
        rec_artifact.origin = "database";
        rec_artifact.path = f.path;
        out.artifacts.push_back(std::move(rec_artifact));

        auto emit = [&](const char* key, ArtifactKind kind, const char* artifact_label,
                        MeaningStatus meaning, std::string note) {
          auto it = rec.fields.find(key);
          if (it == rec.fields.end()) return;
          Artifact a;
          a.kind = kind;
          a.app_id = app;
          a.label = artifact_label;
          a.value = to_bytes(it->second.value);
          a.provenance = range(image, f.offset + it->second.offset, it->second.value.size());
          a.meaning = meaning;
          a.meaning_note = std::move(note);
          a.origin = "database";
          a.path = f.path;
          a.field = key;
          out.artifacts.push_back(std::move(a));
        };
        emit(dbfield::kUser, ArtifactKind::PII, "username", MeaningStatus::Known, {});
        emit(dbfield::kEmail, ArtifactKind::PII, "email", MeaningStatus::Known, {});
        emit(dbfield::kGeo, ArtifactKind::PII, "geolocation", MeaningStatus::Known, {});
        emit(dbfield::kAccess, ArtifactKind::PII, "access_time", MeaningStatus::Unknown, {});
        auto purpose = opt(dbfield::kUrlPurpose);
        emit(dbfield::kFileUrl, ArtifactKind::URL, "file_url",
             purpose ? MeaningStatus::Known : MeaningStatus::Unknown, purpose.value_or(""));
        out.metadata.push_back(std::move(md));
      }
    }
  }
  return out;
}

ExaminationResult analyze_app(const WorkstationItem& image, std::string_view app_id,
                              AnalysisMode mode) {
  ExaminationResult out;
  for (const std::string& app : select_apps(image, layout::kAppRoot, app_id)) {
    const std::string path = layout::package_path(app);
    auto file = layout::find_file(image.data, path);
    if (!file) {
      if (app_id == "*") continue;
      throw Error(ErrorCode::MissingSection, "no package for " + app + " in " + image.id);
    }
    ByteView body = ByteView(image.data).subspan(file->offset, file->length);
    auto pkg = layout::parse_package(body);
    const std::optional<layout::PackageSection> section =
        !pkg ? std::nullopt : mode == AnalysisMode::Static ? pkg->code : pkg->heap;
    if (!section)
      throw Error(ErrorCode::MissingSection,
                  std::string("package for ") + app + " lacks a " +
                      (mode == AnalysisMode::Static ? "code" : "heap") + " section");
    marker_artifacts(image, app, mode == AnalysisMode::Static ? "package-code" : "package-heap",
                     path, file->offset + section->offset, body.subspan(section->offset, section->length),
                     out);
    for (const auto& s : pkg->semantics) out.semantics.push_back({app, s.subject, s.meaning});
  }
  apply_semantics(out.artifacts, out.semantics);
  return out;
}

std::vector<Artifact> extract_accounts(const Device& device, const std::vector<AuditRecord>& trace) {
  bool injected = false;
  bool modified = false;
  for (const AuditRecord& r : trace) {
    if (r.status != InvocationStatus::Completed) continue;
    const auto& inv = r.invocation;
    if (inv.kind == CapabilityKind::Inject && inv.entry_point == "framework") injected = true;
    if (inv.kind == CapabilityKind::Modify && inv.target_data &&
        inv.target_data->text() == "@framework.sigcheck")
      modified = true;
  }
  if (!injected || !modified || device.signature_check_active())
    throw Error(ErrorCode::AccessDenied,
                "accounts store is protected by the framework signature check");

  std::vector<Artifact> out;
  const auto& accounts = device.accounts_store();
  for (std::size_t i = 0; i < accounts.size(); ++i) {
    const AccountRecord& acct = accounts[i];
    auto emit = [&](const char* field, const std::optional<std::string>& value) {
      if (!value || value->empty()) return;
      Artifact a;
      a.kind = ArtifactKind::Credential;
      a.app_id = acct.app_id;
      a.label = std::to_string(i) + "/" + field;
      a.value = to_bytes(*value);
      a.provenance = {Provenance::Form::StoreRecord, "accounts", 0, 0, a.label};
      a.origin = "accounts";
      a.field = field;
      out.push_back(std::move(a));
    };
    emit("username", acct.username);
    emit("password", acct.password);
    emit("email", acct.email);
    emit("refresh_token", acct.refresh_token);
    emit("access_token", acct.access_token);
    emit("timestamp", std::to_string(acct.timestamp));
  }
  return out;
}

Bytes accounts_blob(const std::vector<AccountRecord>& accounts) {
  FixtureManifest m;
  m.accounts = accounts;
  return to_bytes(manifest_to_json(m)["accounts"].dump());
}

std::vector<Artifact> apply_method(std::vector<Artifact> artifacts, Method method,
                                   const std::string& pattern) {
  if (method == Method::PathWalk || method == Method::TableScan) return artifacts;

  std::vector<bool> keep(artifacts.size(), false);
  if (method == Method::KeywordSearch) {
    const Bytes needle = to_bytes(lower(pattern));
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
      const Artifact& a = artifacts[i];
      Bytes hay = to_bytes(lower(std::string(to_string(a.kind)) + "\n" + a.label + "\n" +
                                 to_string(a.value)));
      keep[i] = !scan::find_all(hay, needle).empty();
    }
  } else {
    std::regex re;
    try {
      re = std::regex(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::InvalidArgument, "bad regex '" + pattern + "': " + e.what());
    }
    std::vector<ByteView> segments;
    for (const auto& a : artifacts) segments.emplace_back(a.value);
    for (const scan::Match& m : scan::regex_scan(segments, re)) keep[m.segment] = true;
  }
  std::vector<Artifact> out;
  for (std::size_t i = 0; i < artifacts.size(); ++i)
    if (keep[i]) out.push_back(std::move(artifacts[i]));
  return out;
}

std::size_t apply_semantics(std::vector<Artifact>& artifacts,
                            const std::vector<AppSemantics>& semantics) {
  std::size_t changed = 0;
  for (const AppSemantics& s : semantics) {
    const bool url = s.subject.rfind("url:", 0) == 0;
    const std::string target = s.subject.substr(url ? 4 : 6);
    for (Artifact& a : artifacts) {
      if (a.app_id != s.app_id || a.meaning == MeaningStatus::Known) continue;
      bool match = url ? (a.kind == ArtifactKind::URL && to_string(a.value) == target)
                       : (!a.field.empty() && a.field == target);
      if (!match) continue;
      a.meaning = MeaningStatus::Known;
      a.meaning_note = s.meaning;
      ++changed;
    }
  }
  return changed;
}

Bytes dereference(const Provenance& p, const Workstation& workstation, const Device& device) {
  if (p.form == Provenance::Form::ImageRange) {
    const WorkstationItem* item = workstation.find(p.source);
    if (!item) throw Error(ErrorCode::UnknownTarget, "unknown workstation item " + p.source);
    if (p.offset > item->data.size() || p.length > item->data.size() - p.offset)
      throw Error(ErrorCode::OutOfBounds, "provenance range outside " + p.source);
    auto first = item->data.begin() + static_cast<std::ptrdiff_t>(p.offset);
    return Bytes(first, first + static_cast<std::ptrdiff_t>(p.length));
  }
  if (p.source != "accounts")
    throw Error(ErrorCode::UnknownTarget, "unknown store " + p.source);
  auto slash = p.record.find('/');
  if (slash == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bad record " + p.record);
  std::size_t idx = std::stoul(p.record.substr(0, slash));
  std::string field = p.record.substr(slash + 1);
  const auto& accounts = device.accounts_store();
  if (idx >= accounts.size()) throw Error(ErrorCode::OutOfBounds, "no account " + p.record);
  const AccountRecord& a = accounts[idx];
  std::optional<std::string> v;
  if (field == "username") v = a.username;
  else if (field == "password") v = a.password;
  else if (field == "email") v = a.email;
  else if (field == "refresh_token") v = a.refresh_token;
  else if (field == "access_token") v = a.access_token;
  else if (field == "timestamp") v = std::to_string(a.timestamp);
  if (!v) throw Error(ErrorCode::UnknownTarget, "no field " + p.record);
  return to_bytes(*v);
}

Artifact decrypted_artifact(const Artifact& source, const std::string& item_id,
                            const Bytes& plaintext) {
  Artifact a;
  a.kind = ArtifactKind::CachedData;
  a.app_id = source.app_id;
  a.label = source.label;
  a.value = plaintext;
  a.provenance = {Provenance::Form::ImageRange, item_id, 0, plaintext.size(), {}};
  a.origin = "decrypted";
  a.path = source.path;
  return a;
}

namespace {
json provenance_json(const Provenance& p) {
  if (p.form == Provenance::Form::StoreRecord)
    return {{"store", p.source}, {"record", p.record}};
  return {{"item", p.source}, {"offset", p.offset}, {"length", p.length}};
}
}  // namespace

json to_json(const Artifact& a) {
  json j{{"kind", to_string(a.kind)},
         {"app_id", a.app_id},
         {"label", a.label},
         {"value_hex", to_hex(a.value)},
         {"provenance", provenance_json(a.provenance)},
         {"meaning_status", to_string(a.meaning)},
         {"origin", a.origin}};
  // Text rendering for readers; value_hex is authoritative.
  std::string text = to_string(a.value);
  if (valid_utf8(text)) j["value"] = text;
  if (!a.meaning_note.empty()) j["meaning"] = a.meaning_note;
  if (!a.path.empty()) j["path"] = a.path;
  if (!a.field.empty()) j["field"] = a.field;
  if (a.encrypted) j["encrypted"] = true;
  if (a.key_hint) j["key_hint"] = a.key_hint->to_string();
  return j;
}

namespace {
Provenance provenance_from_json(const json& p) {
  if (p.contains("store"))
    return {Provenance::Form::StoreRecord, p.at("store").get<std::string>(), 0, 0,
            p.at("record").get<std::string>()};
  return {Provenance::Form::ImageRange, p.at("item").get<std::string>(),
          p.at("offset").get<std::uint64_t>(), p.at("length").get<std::uint64_t>(), {}};
}
}  // namespace

Artifact artifact_from_json(const json& j) {
  Artifact a;
  auto kind = parse_artifact_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::Parse, "unknown artifact kind");
  a.kind = *kind;
  a.app_id = j.at("app_id").get<std::string>();
  a.label = j.at("label").get<std::string>();
  a.value = from_hex(j.at("value_hex").get<std::string>());
  a.provenance = provenance_from_json(j.at("provenance"));
  a.meaning = j.at("meaning_status").get<std::string>() == "known" ? MeaningStatus::Known
                                                                  : MeaningStatus::Unknown;
  a.meaning_note = j.value("meaning", "");
  a.origin = j.at("origin").get<std::string>();
  a.path = j.value("path", "");
  a.field = j.value("field", "");
  a.encrypted = j.value("encrypted", false);
  if (j.contains("key_hint")) {
    std::string hint = j.at("key_hint").get<std::string>();
    auto colon = hint.find(':');
    auto hash = hint.rfind('#');
    if (colon != std::string::npos && hash != std::string::npos && hash > colon)
      a.key_hint = layout::KeyRef{hint.substr(0, colon), hint.substr(colon + 1, hash - colon - 1),
                                  hint.substr(hash + 1)};
  }
  return a;
}

json to_json(const FileMetadataRecord& r) {
  json j{{"app_id", r.app_id},   {"database", r.database},     {"table", r.table},
         {"record_id", r.record_id}, {"filename", r.filename}, {"timestamps", r.timestamps},
         {"provenance", provenance_json(r.provenance)}};
  auto put = [&](const char* k, const std::optional<std::string>& v) {
    if (v) j[k] = *v;
  };
  put("paths", r.paths);
  put("file_type", r.file_type);
  put("sharing", r.sharing);
  put("ownership", r.ownership);
  put("permissions", r.permissions);
  put("encryption", r.encryption);
  put("file_hash", r.file_hash);
  put("json", r.json_blob);
  put("file_url", r.file_url);
  put("url_purpose", r.url_purpose);
  if (!r.other.empty()) j["other"] = r.other;
  return j;
}

FileMetadataRecord metadata_from_json(const json& j) {
  FileMetadataRecord r;
  r.app_id = j.at("app_id").get<std::string>();
  r.database = j.at("database").get<std::string>();
  r.table = j.at("table").get<std::string>();
  r.record_id = j.at("record_id").get<std::string>();
  r.filename = j.at("filename").get<std::string>();
  r.timestamps = j.at("timestamps").get<std::map<std::string, std::string>>();
  r.provenance = provenance_from_json(j.at("provenance"));
  auto get = [&](const char* k, std::optional<std::string>& v) {
    if (j.contains(k)) v = j.at(k).get<std::string>();
  };
  get("paths", r.paths);
  get("file_type", r.file_type);
  get("sharing", r.sharing);
  get("ownership", r.ownership);
  get("permissions", r.permissions);
  get("encryption", r.encryption);
  get("file_hash", r.file_hash);
  get("json", r.json_blob);
  get("file_url", r.file_url);
  get("url_purpose", r.url_purpose);
  if (j.contains("other")) r.other = j.at("other").get<std::map<std::string, std::string>>();
  return r;
}

}  // namespace extraction
}  // namespace forenskit
