#include <gtest/gtest.h>

#include <algorithm>
#include <iterator>

#include "forenskit/error.hpp"
#include "forenskit/extraction.hpp"
#include "forenskit/fixtures.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

using testing::ArtifactTuple;

std::string describe(const std::multiset<ArtifactTuple>& s) {
  std::string out;
  for (const auto& [kind, app, label, value, origin] : s)
    out += "  " + kind + " " + app + " " + label + " [" + origin + "] " + value.substr(0, 40) + "\n";
  return out;
}

TEST(Extraction, CompletenessAgainstManifestOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    FixtureManifest m = generate_manifest(seed, 1 + seed % 5);
    ExecutionResult res = testing::run_reference(m, seed);
    ASSERT_TRUE(res.executed()) << seed;
    const auto observed = testing::observed_artifacts(res.trace->artifacts);
    const auto expected = testing::expected_artifacts(m);
    std::multiset<ArtifactTuple> missing, phantom;
    std::set_difference(expected.begin(), expected.end(), observed.begin(), observed.end(),
                        std::inserter(missing, missing.end()));
    std::set_difference(observed.begin(), observed.end(), expected.begin(), expected.end(),
                        std::inserter(phantom, phantom.end()));
    ASSERT_TRUE(missing.empty() && phantom.empty())
        << "seed " << seed << "\nmissing:\n" << describe(missing) << "phantom:\n" << describe(phantom);
  }
}

TEST(Extraction, ProvenanceDereferencesToValue) {
  ExecutionResult res = testing::run_reference(testing::default_fixture(), 7);
  ASSERT_TRUE(res.executed());
  for (const Artifact& a : res.trace->artifacts)
    EXPECT_EQ(extraction::dereference(a.provenance, *res.workstation, *res.device), a.value)
        << to_string(a.kind) << " " << a.label;
}

TEST(Extraction, AccountsGateAcrossFixtures) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    FixtureManifest m = generate_manifest(seed, 3);
    Device fresh = Device::build(m, seed);
    try {
      extraction::extract_accounts(fresh, {});
      FAIL() << seed;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::AccessDenied);
    }
    ExecutionResult res = testing::run_reference(m, seed);
    ASSERT_TRUE(res.executed());
    EXPECT_THROW(extraction::extract_accounts(*res.device, {}), Error);
    auto creds = extraction::extract_accounts(*res.device, res.trace->records);
    std::size_t expected = 0;
    for (const auto& t : testing::expected_artifacts(m)) expected += std::get<4>(t) == "accounts";
    EXPECT_EQ(creds.size(), expected) << seed;
  }
}

TEST(Extraction, ExternalStorageAbsent) {
  auto ex = extraction::examine_external_storage(nullptr, "*");
  EXPECT_TRUE(ex.no_external_storage);
  EXPECT_TRUE(ex.artifacts.empty());
}

TEST(Extraction, MissingPackageSection) {
  FixtureManifest m = testing::default_fixture();
  m.apps[0].package.reset();
  ExecutionResult res = testing::run_reference(m, 7);
  ASSERT_TRUE(res.executed());
  const WorkstationItem* image = res.workstation->latest(ItemKind::Image, "userdata");
  ASSERT_NE(image, nullptr);
  try {
    extraction::analyze_app(*image, m.apps[0].app_id, extraction::AnalysisMode::Static);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingSection);
  }
  EXPECT_FALSE(extraction::analyze_app(*image, m.apps[1].app_id, extraction::AnalysisMode::Dynamic)
                   .artifacts.empty());
}

TEST(Extraction, MethodsFilter) {
  ExecutionResult res = testing::run_reference(testing::default_fixture(), 7);
  ASSERT_TRUE(res.executed());
  const auto& all = res.trace->artifacts;
  auto kw = extraction::apply_method(all, extraction::Method::KeywordSearch, "dropbox");
  EXPECT_FALSE(kw.empty());
  EXPECT_LT(kw.size(), all.size());
  auto rx = extraction::apply_method(all, extraction::Method::RegexScan, "https?://");
  EXPECT_FALSE(rx.empty());
  EXPECT_EQ(extraction::apply_method(all, extraction::Method::PathWalk, "").size(), all.size());
  EXPECT_THROW(extraction::apply_method(all, extraction::Method::RegexScan, "("), Error);
}

TEST(Extraction, SemanticsUpgradeUnknownArtifacts) {
  ExecutionResult res = testing::run_reference(testing::default_fixture(), 7);
  ASSERT_TRUE(res.executed());
  for (const Artifact& a : res.trace->artifacts)
    if (a.kind == ArtifactKind::URL) EXPECT_EQ(a.meaning, MeaningStatus::Known) << a.label;
}

TEST(Extraction, ArtifactJsonRoundTrip) {
  ExecutionResult res = testing::run_reference(testing::default_fixture(), 7);
  ASSERT_TRUE(res.executed());
  for (const Artifact& a : res.trace->artifacts)
    ASSERT_EQ(extraction::artifact_from_json(extraction::to_json(a)), a);
  for (const auto& r : res.trace->metadata)
    ASSERT_EQ(extraction::metadata_from_json(extraction::to_json(r)), r);
}

}  // namespace
}  // namespace forenskit
