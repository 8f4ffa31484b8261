#include <gtest/gtest.h>

#include "forenskit/error.hpp"
#include "forenskit/fixtures.hpp"
#include "forenskit/manifest.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

std::string error_path(const FixtureManifest& m) {
  try {
    validate_manifest(m);
  } catch (const ManifestError& e) {
    return e.path();
  }
  return "";
}

TEST(Manifest, JsonRoundTripOverGeneratedFixtures) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    FixtureManifest m = generate_manifest(seed, 1 + seed % 6);
    EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m) << seed;
  }
}

TEST(Manifest, DefaultFixtureLoads) {
  FixtureManifest m = testing::default_fixture();
  EXPECT_EQ(m.apps.size(), 6u);
  EXPECT_FALSE(m.sdcard_present);
  for (const auto& app : m.apps) {
    EXPECT_FALSE(app.encrypted_files.empty()) << app.app_id;
    EXPECT_TRUE(app.package.has_value()) << app.app_id;
  }
}

TEST(Manifest, ErrorsNameTheEntry) {
  FixtureManifest base = generate_manifest(3, 2);
  {
    FixtureManifest m = base;
    m.apps[1].app_id = m.apps[0].app_id;
    EXPECT_EQ(error_path(m), "apps[1].app_id");
  }
  {
    FixtureManifest m = base;
    m.apps[0].private_files.push_back({"../escape", "x", {}});
    EXPECT_EQ(error_path(m), "apps[0].private_files[" + std::to_string(m.apps[0].private_files.size() - 1) + "].path");
  }
  {
    FixtureManifest m = base;
    m.apps[0].private_files.push_back({"cache/c", "x", {{"PII", "email", "e@x"}}});
    EXPECT_NE(error_path(m).find(".planted"), std::string::npos);
  }
  {
    FixtureManifest m = base;
    m.apps[0].encrypted_files.push_back({"enc/x", "p", "key", "kid", {"com.none", "files/k"}});
    EXPECT_NE(error_path(m).find("key_location"), std::string::npos);
  }
  {
    FixtureManifest m = base;
    m.pii.push_back({m.apps[0].app_id, "shoe_size", "42", "files/p"});
    EXPECT_NE(error_path(m).find("pii["), std::string::npos);
  }
  EXPECT_THROW(manifest_from_json(nlohmann::json::parse(R"({"apps": 3})")), ManifestError);
}

TEST(Fixtures, DeterministicPerSeed) {
  EXPECT_EQ(generate_manifest(99, 4), generate_manifest(99, 4));
  EXPECT_NE(generate_manifest(99, 4), generate_manifest(100, 4));
}

TEST(Fixtures, CoverEveryArtifactClass) {
  std::set<std::string> kinds, origins;
  bool sdcard = false, no_sdcard = false, cross_app_key = false, no_package = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FixtureManifest m = generate_manifest(seed, 4);
    sdcard |= m.sdcard_present;
    no_sdcard |= !m.sdcard_present;
    for (const auto& a : m.apps) {
      no_package |= !a.package;
      for (const auto& e : a.encrypted_files) cross_app_key |= e.key_location.app_id != a.app_id;
    }
    for (const auto& [kind, app, label, value, origin] : testing::expected_artifacts(m))
      kinds.insert(kind + "@" + origin), origins.insert(origin);
  }
  EXPECT_TRUE(origins.count("package-code") && origins.count("package-heap"));
  EXPECT_TRUE(sdcard && no_sdcard && cross_app_key && no_package);
  for (const char* k : {"PII@private", "AuthToken@private", "EncryptionKey@private", "URL@private",
                        "AppSecret@private", "Credential@private", "CachedData@private",
                        "CachedData@external", "CachedData@decrypted", "FileMetadataRecord@database",
                        "PII@database", "URL@database", "Credential@accounts"})
    EXPECT_TRUE(kinds.count(k)) << k;
}

}  // namespace
}  // namespace forenskit
