#include "forenskit/fixtures.hpp"

#include <algorithm>
#include <random>

namespace forenskit {

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  bool chance(unsigned percent) { return below(100) < percent; }

  std::string word(std::size_t min_len, std::size_t max_len) {
    static constexpr std::string_view kAlpha = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s(min_len + below(max_len - min_len + 1), 'a');
    for (auto& c : s) c = kAlpha[below(kAlpha.size())];
    return s;
  }

  // Marker-safe free text: may contain spaces and punctuation, never '>',
  // '<', tabs or newlines.
  std::string text(std::size_t min_len, std::size_t max_len) {
    static constexpr std::string_view kAlpha =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 =:/.-_@#%+";
    std::string s(min_len + below(max_len - min_len + 1), 'a');
    for (auto& c : s) c = kAlpha[below(kAlpha.size())];
    return s;
  }

  std::string pick(std::initializer_list<const char*> items) {
    auto it = items.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(below(items.size())));
    return *it;
  }

 private:
  std::mt19937_64 rng_;
};

PlantedItem random_item(Gen& g) {
  std::string kind = g.pick({"PII", "AuthToken", "EncryptionKey", "URL", "AppSecret", "Credential"});
  std::string label;
  std::string value;
  if (kind == "PII") {
    label = g.pick({"username", "email", "geolocation"});
    if (label == "email") value = g.word(3, 10) + "@" + g.word(3, 8) + ".example";
    else if (label == "geolocation")
      value = std::to_string(g.below(180)) + "." + g.word(4, 4) + "," +
              std::to_string(g.below(360)) + "." + g.word(4, 4) + "," + std::to_string(g.below(1000));
    else value = g.word(4, 12);
  } else if (kind == "URL") {
    label = g.pick({"", "auth", "api"});
    value = "https://" + g.word(4, 10) + ".example/" + g.word(2, 12);
  } else {
    label = g.chance(50) ? g.word(1, 6) : "";
    value = g.text(8, 40);
    if (value.front() == ' ') value.front() = 'x';
  }
  return {kind, label, value};
}

}  // namespace

FixtureManifest generate_manifest(std::uint64_t seed, std::size_t apps) {
  Gen g(seed);
  FixtureManifest m;
  m.sdcard_present = g.chance(30);

  for (std::size_t i = 0; i < apps; ++i) {
    AppFixture app;
    app.app_id = "com." + g.word(3, 8) + ".app" + std::to_string(i);

    const std::size_t files = g.below(4);
    for (std::size_t f = 0; f < files; ++f) {
      FileEntry file{g.pick({"shared_prefs/", "files/", ""}) + g.word(3, 10) + "_" +
                         std::to_string(f) + g.pick({".xml", ".json", ".txt", ""}),
                     g.chance(70) ? g.text(0, 120) : "",
                     {}};
      const std::size_t items = g.below(4);
      for (std::size_t k = 0; k < items; ++k) file.planted.push_back(random_item(g));
      app.private_files.push_back(std::move(file));
    }
    const std::size_t caches = g.below(3);
    for (std::size_t c = 0; c < caches; ++c)
      app.private_files.push_back({"cache/" + g.word(3, 8) + std::to_string(c), g.text(0, 80), {}});

    const std::size_t externals = g.below(3);
    for (std::size_t e = 0; e < externals; ++e)
      app.external_files.push_back(
          {"files/" + g.word(3, 8) + "_" + std::to_string(e) + ".cache", g.text(0, 200), {}});

    const std::size_t dbs = g.below(3);
    for (std::size_t d = 0; d < dbs; ++d) {
      DatabaseFixture db{g.word(3, 8) + std::to_string(d), {}};
      const std::size_t tables = 1 + g.below(2);
      for (std::size_t t = 0; t < tables; ++t) {
        TableFixture table{g.pick({"files", "sync_log", "metadata", "shares"}) + std::to_string(t), {}};
        const std::size_t records = g.below(4);
        for (std::size_t r = 0; r < records; ++r) {
          RecordFixture rec{std::to_string(r + 1), {}};
          rec.fields.emplace_back(dbfield::kFilename, g.word(3, 10) + g.pick({".pdf", ".jpg", ".docx"}));
          rec.fields.emplace_back(g.pick({dbfield::kAccess, dbfield::kModification, dbfield::kSync,
                                          dbfield::kCreation, dbfield::kDeletion}),
                                  std::to_string(1500000000 + g.below(100000000)));
          if (g.chance(50)) rec.fields.emplace_back(dbfield::kPaths, "/" + g.word(3, 8) + "/" + g.word(3, 8));
          if (g.chance(40)) rec.fields.emplace_back(dbfield::kUser, g.word(4, 10));
          if (g.chance(30)) rec.fields.emplace_back(dbfield::kEmail, g.word(3, 8) + "@mail.example");
          if (g.chance(30)) rec.fields.emplace_back(dbfield::kGeo, "51." + g.word(4, 4) + ",-0." + g.word(4, 4));
          if (g.chance(40)) rec.fields.emplace_back(dbfield::kFileUrl, "https://cdn.example/" + g.word(6, 12));
          if (g.chance(20)) rec.fields.emplace_back(dbfield::kUrlPurpose, "thumbnail download");
          if (g.chance(30)) rec.fields.emplace_back(dbfield::kFileHash, g.word(32, 32));
          if (g.chance(20)) rec.fields.emplace_back(dbfield::kJson, "{\"rev\": " + std::to_string(g.below(99)) + "}");
          if (g.chance(20)) rec.fields.emplace_back(dbfield::kSharing, g.pick({"private", "shared", "public-link"}));
          if (g.chance(20)) rec.fields.emplace_back("x_" + g.word(2, 6), g.text(1, 20));
          // Duplicate timestamp keys are rejected; keep the first occurrence.
          std::vector<std::pair<std::string, std::string>> unique;
          for (auto& kv : rec.fields) {
            bool seen = false;
            for (const auto& u : unique) seen = seen || u.first == kv.first;
            if (!seen) unique.push_back(kv);
          }
          // Key order, matching what a JSON round trip yields.
          std::sort(unique.begin(), unique.end());
          rec.fields = std::move(unique);
          table.records.push_back(std::move(rec));
        }
        db.tables.push_back(std::move(table));
      }
      app.databases.push_back(std::move(db));
    }

    if (g.chance(70)) {
      PackageFixture pkg;
      const std::size_t code = g.below(4);
      for (std::size_t k = 0; k < code; ++k) pkg.code.push_back(random_item(g));
      const std::size_t heap = g.below(3);
      for (std::size_t k = 0; k < heap; ++k) pkg.heap.push_back(random_item(g));
      for (const auto& item : pkg.code)
        if (item.kind == "URL" && g.chance(60))
          pkg.semantics.push_back({"url:" + item.value, "authentication endpoint"});
      if (g.chance(50)) pkg.semantics.push_back({"field:ts_access", "last time the file was opened"});
      app.package = std::move(pkg);
    }
    m.apps.push_back(std::move(app));
  }

  // Encrypted external files whose keys live in some app's private storage.
  for (std::size_t i = 0; i < m.apps.size(); ++i) {
    const std::size_t count = g.below(3);
    for (std::size_t e = 0; e < count; ++e) {
      const AppFixture& holder = m.apps[g.below(m.apps.size())];
      EncryptedFile enc;
      enc.path = "files/secure_" + std::to_string(e) + ".enc";
      enc.plaintext = g.text(0, 160);
      enc.key = g.text(16, 32);
      enc.key_id = "k" + std::to_string(i) + "_" + std::to_string(e);
      enc.key_location = {holder.app_id, g.pick({"shared_prefs/keys.xml", "files/keystore"})};
      m.apps[i].encrypted_files.push_back(std::move(enc));
    }
  }

  for (const AppFixture& app : m.apps) {
    if (g.chance(40))
      m.pii.push_back({app.app_id, g.pick({"username", "email", "geolocation"}), g.word(5, 12),
                       g.pick({"files/profile.txt", "shared_prefs/user.xml"})});
    const std::size_t accounts = g.below(3);
    for (std::size_t a = 0; a < accounts; ++a) {
      AccountRecord acct;
      acct.app_id = app.app_id;
      acct.username = g.word(4, 12);
      if (g.chance(40)) acct.password = g.text(6, 16);
      if (g.chance(50)) acct.email = acct.username + "@mail.example";
      if (g.chance(60)) acct.refresh_token = g.word(24, 40);
      if (!acct.password || g.chance(50)) acct.access_token = g.word(24, 40);
      acct.timestamp = 1600000000 + g.below(100000000);
      m.accounts.push_back(std::move(acct));
    }
  }

  const std::size_t channels = g.below(3);
  for (std::size_t c = 0; c < channels; ++c) {
    ChannelFixture ch{"net" + std::to_string(c), {}};
    const std::size_t msgs = g.below(4);
    for (std::size_t k = 0; k < msgs; ++k) ch.messages.push_back(g.text(0, 64));
    m.channels.push_back(std::move(ch));
  }

  validate_manifest(m);
  return m;
}

}  // namespace forenskit
