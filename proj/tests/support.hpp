#pragma once

// Shared fixtures and independent oracles for the test suite. Oracles here
// derive expected values from the manifest and from OpenSSL one-shot calls,
// never from the library code under test.

#include <openssl/sha.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "forenskit/artifact.hpp"
#include "forenskit/executor.hpp"
#include "forenskit/extraction.hpp"
#include "forenskit/fixtures.hpp"
#include "forenskit/manifest.hpp"
#include "forenskit/plan.hpp"

#ifndef FORENSKIT_DATA_DIR
#error "FORENSKIT_DATA_DIR must point at the source tree"
#endif

namespace forenskit::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(FORENSKIT_DATA_DIR) + "/" + rel;
}

inline Plan reference_plan() { return load_plan(data_path("plans/reference.fplan")); }

inline FixtureManifest default_fixture() { return load_manifest(data_path("fixtures/default.json")); }

inline std::string oracle_sha256_hex(const std::uint8_t* data, std::size_t n) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(data, n, md);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : md) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

inline std::string oracle_sha256_hex(const Bytes& b) { return oracle_sha256_hex(b.data(), b.size()); }

/// Keystream XOR: block i = SHA-256(key || le64(i)).
inline Bytes oracle_xor(const Bytes& data, const Bytes& key) {
  Bytes out(data.size());
  unsigned char block[SHA256_DIGEST_LENGTH];
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i % SHA256_DIGEST_LENGTH == 0) {
      Bytes in = key;
      std::uint64_t idx = i / SHA256_DIGEST_LENGTH;
      for (int b = 0; b < 8; ++b) in.push_back(static_cast<std::uint8_t>(idx >> (8 * b)));
      SHA256(in.data(), in.size(), block);
    }
    out[i] = data[i] ^ block[i % SHA256_DIGEST_LENGTH];
  }
  return out;
}

inline Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

/// (kind, app, label, value, origin)
using ArtifactTuple = std::tuple<std::string, std::string, std::string, std::string, std::string>;

inline std::multiset<ArtifactTuple> observed_artifacts(const std::vector<Artifact>& artifacts) {
  std::multiset<ArtifactTuple> out;
  for (const auto& a : artifacts)
    out.insert({std::string(to_string(a.kind)), a.app_id, a.label,
                std::string(a.value.begin(), a.value.end()), a.origin});
  return out;
}

/// Everything a complete examination of a device built from `m` must yield.
inline std::multiset<ArtifactTuple> expected_artifacts(const FixtureManifest& m) {
  std::multiset<ArtifactTuple> out;
  for (const AppFixture& app : m.apps) {
    // Private files: path -> (body text, markers)
    std::map<std::string, std::pair<std::string, std::vector<PlantedItem>>> files;
    for (const FileEntry& f : app.private_files) {
      auto& e = files[f.path];
      e.first = f.content;
      e.second.insert(e.second.end(), f.planted.begin(), f.planted.end());
    }
    for (const PiiEntry& p : m.pii)
      if (p.app_id == app.app_id) files[p.path].second.push_back({"PII", p.label, p.value});
    for (const AppFixture& other : m.apps)
      for (const EncryptedFile& e : other.encrypted_files)
        if (e.key_location.app_id == app.app_id)
          files[e.key_location.path].second.push_back({"EncryptionKey", e.key_id, e.key});

    for (const auto& [path, entry] : files) {
      if (path.rfind("cache/", 0) == 0) {
        std::string body = entry.first;
        for (const PlantedItem& p : entry.second) {
          if (!body.empty()) body += '\n';
          body += "<<FSK:" + p.kind + (p.label.empty() ? "" : "/" + p.label) + "=" + p.value + ">>";
        }
        out.insert({"CachedData", app.app_id, path, body, "private"});
        continue;
      }
      for (const PlantedItem& p : entry.second)
        out.insert({p.kind, app.app_id, p.label, p.value, "private"});
    }

    for (const FileEntry& f : app.external_files)
      out.insert({"CachedData", app.app_id, f.path, f.content, "external"});
    for (const EncryptedFile& e : app.encrypted_files) {
      Bytes cipher = oracle_xor(bytes_of(e.plaintext), bytes_of(e.key));
      out.insert({"CachedData", app.app_id, e.path, std::string(cipher.begin(), cipher.end()),
                  "external"});
      out.insert({"CachedData", app.app_id, e.path, e.plaintext, "decrypted"});
    }

    for (const DatabaseFixture& db : app.databases)
      for (const TableFixture& t : db.tables)
        for (const RecordFixture& r : t.records) {
          std::map<std::string, std::string> fields(r.fields.begin(), r.fields.end());
          std::string line = "R " + r.id;
          for (const auto& [k, v] : r.fields) line += "\t" + k + "=" + v;
          out.insert({"FileMetadataRecord", app.app_id, db.name + "/" + t.name + "/" + r.id, line,
                      "database"});
          const std::vector<std::tuple<std::string, std::string, std::string>> typed{
              {"user", "PII", "username"},        {"email", "PII", "email"},
              {"geo", "PII", "geolocation"},      {"ts_access", "PII", "access_time"},
              {"file_url", "URL", "file_url"}};
          for (const auto& [field, kind, label] : typed)
            if (auto it = fields.find(field); it != fields.end())
              out.insert({kind, app.app_id, label, it->second, "database"});
        }

    if (app.package) {
      for (const PlantedItem& p : app.package->code)
        out.insert({p.kind, app.app_id, p.label, p.value, "package-code"});
      for (const PlantedItem& p : app.package->heap)
        out.insert({p.kind, app.app_id, p.label, p.value, "package-heap"});
    }
  }

  for (std::size_t i = 0; i < m.accounts.size(); ++i) {
    const AccountRecord& a = m.accounts[i];
    auto add = [&](const std::string& field, const std::optional<std::string>& v) {
      if (v && !v->empty())
        out.insert({"Credential", a.app_id, std::to_string(i) + "/" + field, *v, "accounts"});
    };
    add("username", a.username);
    add("password", a.password);
    add("email", a.email);
    add("refresh_token", a.refresh_token);
    add("access_token", a.access_token);
    add("timestamp", std::to_string(a.timestamp));
  }
  return out;
}

inline CapabilityInvocation parse_invocation(const std::string& line) {
  Plan p = parse_plan("stage AnalyzeApp {\n  invoke " + line + "\n}\n");
  return p.stages.at(0).invocations.at(0);
}

/// One strict-valid invocation of each capability, as it would appear in a
/// plan stage that allows it.
inline CapabilityInvocation representative(CapabilityKind kind) {
  const auto parse_one = parse_invocation;
  switch (kind) {
    case CapabilityKind::Corrupt: return parse_one("Corrupt");
    case CapabilityKind::Delete:
      return parse_one("Delete target=@system.su declare=@system.su");
    case CapabilityKind::EncryptDecrypt:
      return parse_one("EncryptDecrypt target=image:userdata key=text:k");
    case CapabilityKind::Exploit: return parse_one("Exploit entry=bootloader-unsigned-boot");
    case CapabilityKind::ForensicCopy: return parse_one("ForensicCopy partition=userdata");
    case CapabilityKind::ForensicExamination:
      return parse_one("ForensicExamination target=image:userdata method=path-walk scope=private");
    case CapabilityKind::Inject: return parse_one("Inject entry=memory message=text:live");
    case CapabilityKind::Listen: return parse_one("Listen target=channel:network");
    case CapabilityKind::Modify:
      return parse_one("Modify target=@bootloader.live_boot message=text:1 declare=@bootloader.live_boot");
    case CapabilityKind::Transmit: return parse_one("Transmit source=accounts");
  }
  return {};
}

inline ExecutionResult run_reference(const FixtureManifest& m, std::uint64_t seed,
                                     FaultConfig fault = {}) {
  ExecuteOptions opts;
  opts.seed = seed;
  opts.fault = fault;
  return execute_plan(reference_plan(), Device::build(m, seed), opts);
}

/// Random plans that need not validate, for parse/render properties.
class PlanGen {
 public:
  explicit PlanGen(std::uint64_t seed) : rng_(seed) {}

  Plan plan() {
    Plan p;
    p.level = kAllLevels[below(2)];
    p.practitioner.id = text(1);
    p.practitioner.experience = static_cast<Experience>(below(3));
    std::vector<StageKind> stages(kAllStages.begin(), kAllStages.end());
    std::shuffle(stages.begin(), stages.end(), rng_);
    stages.resize(below(stages.size() + 1));
    for (StageKind k : stages) {
      PlanStage s;
      s.kind = k;
      for (std::size_t n = below(4); n > 0; --n) s.invocations.push_back(invocation());
      p.stages.push_back(std::move(s));
    }
    return p;
  }

 private:
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 0; }

  std::string text(std::size_t min_len) {
    static const std::string chars =
        "abcXYZ019-_.:/@+ \t\n\"\\{}#=,";
    std::string s;
    for (std::size_t n = min_len + below(8); n > 0; --n) s += chars[below(chars.size())];
    return s;
  }
  Bytes bytes() {
    Bytes b(below(12));
    const bool printable = coin();
    for (auto& c : b) c = printable ? static_cast<std::uint8_t>(0x20 + below(95)) : static_cast<std::uint8_t>(below(256));
    return b;
  }
  RegionRef ref() {
    static const char* refs[] = {"userdata",        "userdata@128+64", "userdata:/data/data/com.x/f",
                                 "@framework.sigcheck", "image:userdata", "workstation:abc",
                                 "channel:network", "system"};
    return RegionRef::parse(refs[below(std::size(refs))]);
  }

  CapabilityInvocation invocation() {
    CapabilityInvocation inv;
    inv.kind = kAllCapabilities[below(kCapabilityCount)];
    if (coin()) inv.target_data = ref();
    if (coin()) inv.key = bytes();
    if (coin()) inv.entry_point = text(1);
    if (coin()) inv.message = Payload{bytes(), coin()};
    if (coin()) inv.method = text(1);
    for (std::size_t n = below(3); n > 0; --n) {
      DeclaredEffect e{ref(), std::nullopt};
      if (coin()) {
        Digest d;
        for (auto& b : d.bytes) b = static_cast<std::uint8_t>(below(256));
        e.after_digest = d;
      }
      inv.declared_effects.push_back(e);
    }
    static const char* opts[] = {"app", "mode", "pattern", "source", "direction", "name", "path", "scope"};
    for (const char* o : opts)
      if (below(4) == 0) inv.options[o] = text(0);
    return inv;
  }

  std::mt19937_64 rng_;
};

}  // namespace forenskit::testing
