#include "forenskit/manifest.hpp"

#include <fstream>
#include <set>

#include "forenskit/error.hpp"
#include "forenskit/layout.hpp"

namespace forenskit {

using nlohmann::json;

namespace {

const std::set<std::string> kPlantableKinds{"PII",       "AuthToken",  "EncryptionKey",
                                            "URL",       "AppSecret",  "Credential"};

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& field(const json& j, const std::string& path, const char* name) {
  if (!j.is_object()) throw ManifestError(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ManifestError(path + "." + name, "missing required field");
  return *it;
}

std::string get_string(const json& j, const std::string& path, const char* name) {
  const json& v = field(j, path, name);
  if (!v.is_string()) throw ManifestError(path + "." + name, "expected a string");
  return v.get<std::string>();
}

std::string opt_string(const json& j, const std::string& path, const char* name,
                       std::string fallback = {}) {
  if (!j.is_object()) throw ManifestError(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw ManifestError(path + "." + name, "expected a string");
  return it->get<std::string>();
}

std::optional<std::string> maybe_string(const json& j, const std::string& path,
                                        const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ManifestError(path + "." + name, "expected a string");
  return it->get<std::string>();
}

const json& opt_array(const json& j, const std::string& path, const char* name) {
  static const json empty = json::array();
  if (!j.is_object()) throw ManifestError(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) return empty;
  if (!it->is_array()) throw ManifestError(path + "." + name, "expected an array");
  return *it;
}

std::vector<PlantedItem> planted_list(const json& j, const std::string& path,
                                      const char* name) {
  std::vector<PlantedItem> out;
  const json& arr = opt_array(j, path, name);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = at(path + "." + name, i);
    out.push_back({get_string(arr[i], p, "kind"), opt_string(arr[i], p, "label"),
                   get_string(arr[i], p, "value")});
  }
  return out;
}

std::vector<FileEntry> file_list(const json& j, const std::string& path, const char* name) {
  std::vector<FileEntry> out;
  const json& arr = opt_array(j, path, name);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = at(path + "." + name, i);
    out.push_back({get_string(arr[i], p, "path"), opt_string(arr[i], p, "content"),
                   planted_list(arr[i], p, "planted")});
  }
  return out;
}

json planted_json(const std::vector<PlantedItem>& items) {
  json arr = json::array();
  for (const auto& p : items) {
    json o{{"kind", p.kind}, {"value", p.value}};
    if (!p.label.empty()) o["label"] = p.label;
    arr.push_back(o);
  }
  return arr;
}

json files_json(const std::vector<FileEntry>& files) {
  json arr = json::array();
  for (const auto& f : files) {
    json o{{"path", f.path}, {"content", f.content}};
    if (!f.planted.empty()) o["planted"] = planted_json(f.planted);
    arr.push_back(o);
  }
  return arr;
}

bool valid_relative_path(const std::string& p) {
  if (p.empty() || p.front() == '/' || p.back() == '/') return false;
  if (p.find("..") != std::string::npos) return false;
  for (char c : p)
    if (c == ' ' || c == '\t' || c == '\n' || c == ',' || c == '"' || c == '=' ||
        c == ':' || c == '#' || c == '\\' || c == '{' || c == '}' || c == '\r' || c == '>')
      return false;
  return true;
}

bool valid_app_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void check(bool cond, const std::string& path, const std::string& message) {
  if (!cond) throw ManifestError(path, message);
}

void check_planted(const std::vector<PlantedItem>& items, const std::string& base) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string p = at(base, i);
    check(kPlantableKinds.count(items[i].kind) > 0, p + ".kind",
          "unknown artifact kind '" + items[i].kind + "'");
    check(layout::valid_marker_label(items[i].label), p + ".label", "invalid label");
    check(!items[i].value.empty() && layout::valid_marker_value(items[i].value),
          p + ".value", "value must be non-empty and free of '>', tabs and newlines");
  }
}

bool contains_marker_syntax(const std::string& s) {
  return s.find(layout::kMarkerOpen) != std::string::npos;
}

}  // namespace

FixtureManifest manifest_from_json(const json& j) {
  FixtureManifest m;
  if (!j.is_object()) throw ManifestError("$", "manifest must be a JSON object");
  if (auto it = j.find("sdcard_present"); it != j.end()) {
    if (!it->is_boolean()) throw ManifestError("sdcard_present", "expected a boolean");
    m.sdcard_present = it->get<bool>();
  }

  const json& apps = opt_array(j, "$", "apps");
  for (std::size_t i = 0; i < apps.size(); ++i) {
    std::string p = at("apps", i);
    AppFixture app;
    app.app_id = get_string(apps[i], p, "app_id");
    app.private_files = file_list(apps[i], p, "private_files");
    app.external_files = file_list(apps[i], p, "external_files");

    const json& enc = opt_array(apps[i], p, "encrypted_files");
    for (std::size_t e = 0; e < enc.size(); ++e) {
      std::string ep = at(p + ".encrypted_files", e);
      EncryptedFile f;
      f.path = get_string(enc[e], ep, "path");
      f.plaintext = get_string(enc[e], ep, "plaintext");
      f.key = get_string(enc[e], ep, "key");
      f.key_id = get_string(enc[e], ep, "key_id");
      const json& loc = field(enc[e], ep, "key_location");
      f.key_location = {get_string(loc, ep + ".key_location", "app_id"),
                        get_string(loc, ep + ".key_location", "path")};
      app.encrypted_files.push_back(std::move(f));
    }

    const json& dbs = opt_array(apps[i], p, "databases");
    for (std::size_t d = 0; d < dbs.size(); ++d) {
      std::string dp = at(p + ".databases", d);
      DatabaseFixture db;
      db.name = get_string(dbs[d], dp, "name");
      const json& tables = opt_array(dbs[d], dp, "tables");
      for (std::size_t t = 0; t < tables.size(); ++t) {
        std::string tp = at(dp + ".tables", t);
        TableFixture table;
        table.name = get_string(tables[t], tp, "name");
        const json& recs = opt_array(tables[t], tp, "records");
        for (std::size_t r = 0; r < recs.size(); ++r) {
          std::string rp = at(tp + ".records", r);
          RecordFixture rec;
          rec.id = get_string(recs[r], rp, "id");
          const json& fields = field(recs[r], rp, "fields");
          if (!fields.is_object()) throw ManifestError(rp + ".fields", "expected an object");
          for (auto it = fields.begin(); it != fields.end(); ++it) {
            if (!it->is_string())
              throw ManifestError(rp + ".fields." + it.key(), "expected a string");
            rec.fields.emplace_back(it.key(), it->get<std::string>());
          }
          table.records.push_back(std::move(rec));
        }
        db.tables.push_back(std::move(table));
      }
      app.databases.push_back(std::move(db));
    }

    if (auto it = apps[i].find("package"); it != apps[i].end() && !it->is_null()) {
      std::string pp = p + ".package";
      PackageFixture pkg;
      pkg.code = planted_list(*it, pp, "code");
      pkg.heap = planted_list(*it, pp, "heap");
      const json& sem = opt_array(*it, pp, "semantics");
      for (std::size_t s = 0; s < sem.size(); ++s) {
        std::string sp = at(pp + ".semantics", s);
        pkg.semantics.push_back(
            {get_string(sem[s], sp, "subject"), get_string(sem[s], sp, "meaning")});
      }
      app.package = std::move(pkg);
    }
    m.apps.push_back(std::move(app));
  }

  const json& accounts = opt_array(j, "$", "accounts");
  for (std::size_t i = 0; i < accounts.size(); ++i) {
    std::string p = at("accounts", i);
    AccountRecord a;
    a.app_id = get_string(accounts[i], p, "app_id");
    a.username = get_string(accounts[i], p, "username");
    a.password = maybe_string(accounts[i], p, "password");
    a.email = maybe_string(accounts[i], p, "email");
    a.refresh_token = maybe_string(accounts[i], p, "refresh_token");
    a.access_token = maybe_string(accounts[i], p, "access_token");
    const json& ts = field(accounts[i], p, "timestamp");
    if (!ts.is_number_unsigned()) throw ManifestError(p + ".timestamp", "expected a non-negative integer");
    a.timestamp = ts.get<std::uint64_t>();
    m.accounts.push_back(std::move(a));
  }

  const json& pii = opt_array(j, "$", "pii");
  for (std::size_t i = 0; i < pii.size(); ++i) {
    std::string p = at("pii", i);
    m.pii.push_back({get_string(pii[i], p, "app_id"), get_string(pii[i], p, "label"),
                     get_string(pii[i], p, "value"), get_string(pii[i], p, "path")});
  }

  const json& channels = opt_array(j, "$", "channels");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    std::string p = at("channels", i);
    ChannelFixture c;
    c.name = get_string(channels[i], p, "name");
    const json& msgs = opt_array(channels[i], p, "messages");
    for (std::size_t k = 0; k < msgs.size(); ++k) {
      if (!msgs[k].is_string()) throw ManifestError(at(p + ".messages", k), "expected a string");
      c.messages.push_back(msgs[k].get<std::string>());
    }
    m.channels.push_back(std::move(c));
  }

  validate_manifest(m);
  return m;
}

FixtureManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Io, "manifest " + path + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j);
}

json manifest_to_json(const FixtureManifest& m) {
  json j;
  j["sdcard_present"] = m.sdcard_present;
  j["apps"] = json::array();
  for (const auto& app : m.apps) {
    json a{{"app_id", app.app_id}};
    a["private_files"] = files_json(app.private_files);
    a["external_files"] = files_json(app.external_files);
    a["encrypted_files"] = json::array();
    for (const auto& e : app.encrypted_files)
      a["encrypted_files"].push_back(
          {{"path", e.path},
           {"plaintext", e.plaintext},
           {"key", e.key},
           {"key_id", e.key_id},
           {"key_location", {{"app_id", e.key_location.app_id}, {"path", e.key_location.path}}}});
    a["databases"] = json::array();
    for (const auto& db : app.databases) {
      json d{{"name", db.name}, {"tables", json::array()}};
      for (const auto& t : db.tables) {
        json tj{{"name", t.name}, {"records", json::array()}};
        for (const auto& r : t.records) {
          json fields = json::object();
          for (const auto& [k, v] : r.fields) fields[k] = v;
          tj["records"].push_back({{"id", r.id}, {"fields", fields}});
        }
        d["tables"].push_back(tj);
      }
      a["databases"].push_back(d);
    }
    if (app.package) {
      json p{{"code", planted_json(app.package->code)},
             {"heap", planted_json(app.package->heap)},
             {"semantics", json::array()}};
      for (const auto& s : app.package->semantics)
        p["semantics"].push_back({{"subject", s.subject}, {"meaning", s.meaning}});
      a["package"] = p;
    }
    j["apps"].push_back(a);
  }
  j["accounts"] = json::array();
  for (const auto& acc : m.accounts) {
    json a{{"app_id", acc.app_id}, {"username", acc.username}, {"timestamp", acc.timestamp}};
    if (acc.password) a["password"] = *acc.password;
    if (acc.email) a["email"] = *acc.email;
    if (acc.refresh_token) a["refresh_token"] = *acc.refresh_token;
    if (acc.access_token) a["access_token"] = *acc.access_token;
    j["accounts"].push_back(a);
  }
  j["pii"] = json::array();
  for (const auto& p : m.pii)
    j["pii"].push_back(
        {{"app_id", p.app_id}, {"label", p.label}, {"value", p.value}, {"path", p.path}});
  j["channels"] = json::array();
  for (const auto& c : m.channels) j["channels"].push_back({{"name", c.name}, {"messages", c.messages}});
  return j;
}

void validate_manifest(const FixtureManifest& m) {
  std::set<std::string> app_ids;
  for (std::size_t i = 0; i < m.apps.size(); ++i) {
    const AppFixture& app = m.apps[i];
    std::string p = at("apps", i);
    check(valid_app_id(app.app_id), p + ".app_id", "invalid app id");
    check(app_ids.insert(app.app_id).second, p + ".app_id", "duplicate app id");

    std::set<std::string> private_paths;
    for (std::size_t f = 0; f < app.private_files.size(); ++f) {
      const FileEntry& file = app.private_files[f];
      std::string fp = at(p + ".private_files", f);
      check(valid_relative_path(file.path), fp + ".path", "invalid relative path");
      check(private_paths.insert(file.path).second, fp + ".path", "duplicate path");
      check(file.path.rfind("databases/", 0) != 0, fp + ".path",
            "databases/ is reserved for database fixtures");
      check(!contains_marker_syntax(file.content), fp + ".content",
            "content must not contain marker syntax");
      if (file.path.rfind("cache/", 0) == 0)
        check(file.planted.empty(), fp + ".planted", "cache files cannot carry planted items");
      check_planted(file.planted, fp + ".planted");
    }

    std::set<std::string> external_paths;
    for (std::size_t f = 0; f < app.external_files.size(); ++f) {
      const FileEntry& file = app.external_files[f];
      std::string fp = at(p + ".external_files", f);
      check(valid_relative_path(file.path), fp + ".path", "invalid relative path");
      check(external_paths.insert(file.path).second, fp + ".path", "duplicate path");
      check(file.planted.empty(), fp + ".planted", "external files carry no planted items");
      check(!contains_marker_syntax(file.content), fp + ".content",
            "content must not contain marker syntax");
      check(file.content.rfind(layout::kEncryptedMagic, 0) != 0, fp + ".content",
            "content collides with the encrypted-file header");
    }
    for (std::size_t e = 0; e < app.encrypted_files.size(); ++e) {
      const EncryptedFile& enc = app.encrypted_files[e];
      std::string ep = at(p + ".encrypted_files", e);
      check(valid_relative_path(enc.path), ep + ".path", "invalid relative path");
      check(external_paths.insert(enc.path).second, ep + ".path", "duplicate path");
      check(!enc.key.empty() && layout::valid_marker_value(enc.key), ep + ".key",
            "key must be non-empty and marker-safe");
      check(!enc.key_id.empty() && layout::valid_marker_label(enc.key_id), ep + ".key_id",
            "invalid key id");
      check(valid_relative_path(enc.key_location.path) &&
                enc.key_location.path.rfind("cache/", 0) != 0 &&
                enc.key_location.path.rfind("databases/", 0) != 0,
            ep + ".key_location.path", "key must live in a private, non-cache file");
    }

    for (std::size_t d = 0; d < app.databases.size(); ++d) {
      const DatabaseFixture& db = app.databases[d];
      std::string dp = at(p + ".databases", d);
      check(valid_relative_path(db.name) && db.name.find('/') == std::string::npos,
            dp + ".name", "invalid database name");
      for (std::size_t t = 0; t < db.tables.size(); ++t) {
        const TableFixture& table = db.tables[t];
        std::string tp = at(dp + ".tables", t);
        check(!table.name.empty() && layout::valid_db_token(table.name), tp + ".name",
              "invalid table name");
        std::set<std::string> ids;
        for (std::size_t r = 0; r < table.records.size(); ++r) {
          const RecordFixture& rec = table.records[r];
          std::string rp = at(tp + ".records", r);
          check(!rec.id.empty() && layout::valid_db_token(rec.id) &&
                    rec.id.find(' ') == std::string::npos,
                rp + ".id", "invalid record id");
          check(ids.insert(rec.id).second, rp + ".id", "duplicate record id");
          bool has_filename = false;
          bool has_timestamp = false;
          std::set<std::string> keys;
          for (const auto& [k, v] : rec.fields) {
            check(!k.empty() && layout::valid_db_token(k) && k.find('=') == std::string::npos,
                  rp + ".fields." + k, "invalid field name");
            check(keys.insert(k).second, rp + ".fields." + k, "duplicate field");
            check(layout::valid_db_token(v) && !v.empty(), rp + ".fields." + k,
                  "value must be non-empty without tabs or newlines");
            if (k == dbfield::kFilename) has_filename = true;
            if (k.rfind("ts_", 0) == 0) has_timestamp = true;
          }
          check(has_filename && has_timestamp, rp + ".fields",
                "file metadata records need a filename and at least one timestamp");
        }
      }
    }

    if (app.package) {
      check_planted(app.package->code, p + ".package.code");
      check_planted(app.package->heap, p + ".package.heap");
      for (std::size_t s = 0; s < app.package->semantics.size(); ++s) {
        const auto& sem = app.package->semantics[s];
        std::string sp = at(p + ".package.semantics", s);
        check((sem.subject.rfind("url:", 0) == 0 || sem.subject.rfind("field:", 0) == 0) &&
                  layout::valid_db_token(sem.subject),
              sp + ".subject", "subject must be url:<value> or field:<name>");
        check(layout::valid_db_token(sem.meaning) && !sem.meaning.empty(), sp + ".meaning",
              "invalid meaning text");
      }
    }
  }

  // Key locations resolve to some app's private storage.
  for (std::size_t i = 0; i < m.apps.size(); ++i)
    for (std::size_t e = 0; e < m.apps[i].encrypted_files.size(); ++e) {
      const auto& loc = m.apps[i].encrypted_files[e].key_location;
      check(app_ids.count(loc.app_id) > 0,
            at(at("apps", i) + ".encrypted_files", e) + ".key_location.app_id",
            "key location names an unknown app");
    }

  for (std::size_t i = 0; i < m.accounts.size(); ++i) {
    const AccountRecord& a = m.accounts[i];
    std::string p = at("accounts", i);
    check(!a.app_id.empty(), p + ".app_id", "missing app id");
    check(a.password || a.refresh_token || a.access_token, p,
          "account needs a password, refresh token or access token");
  }

  for (std::size_t i = 0; i < m.pii.size(); ++i) {
    const PiiEntry& e = m.pii[i];
    std::string p = at("pii", i);
    check(app_ids.count(e.app_id) > 0, p + ".app_id", "unknown app");
    check(e.label == "username" || e.label == "email" || e.label == "geolocation",
          p + ".label", "label must be username, email or geolocation");
    check(!e.value.empty() && layout::valid_marker_value(e.value), p + ".value",
          "invalid value");
    check(valid_relative_path(e.path) && e.path.rfind("cache/", 0) != 0 &&
              e.path.rfind("databases/", 0) != 0,
          p + ".path", "PII must be planted in a private, non-cache file");
  }

  std::set<std::string> channel_names;
  for (std::size_t i = 0; i < m.channels.size(); ++i) {
    std::string p = at("channels", i);
    check(valid_app_id(m.channels[i].name), p + ".name", "invalid channel name");
    check(channel_names.insert(m.channels[i].name).second, p + ".name", "duplicate channel");
  }
}

}  // namespace forenskit
