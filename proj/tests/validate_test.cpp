#include <gtest/gtest.h>

#include <chrono>

#include "forenskit/validate.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

Plan one_stage(StageKind stage, const std::string& line, SoundnessLevel level = SoundnessLevel::Strict) {
  Plan p;
  p.level = level;
  p.stages.push_back({stage, {testing::parse_invocation(line)}, 0});
  return p;
}

bool has_rule(const ValidationReport& r, const std::string& rule, Severity sev = Severity::Error) {
  for (const auto& f : r.findings)
    if (f.rule == rule && f.severity == sev) return true;
  return false;
}

TEST(Validate, ReferencePlanIsClean) {
  ValidationReport r = validate_plan(testing::reference_plan());
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.findings.empty());
}

TEST(Validate, ExhaustiveSubsetsMatchStageRows) {
  const auto start = std::chrono::steady_clock::now();
  for (StageKind stage : kAllStages) {
    const CapabilitySet allowed = canonical_stage_map().lookup(stage).allowed;
    for (std::uint16_t mask = 0; mask < (1u << kCapabilityCount); ++mask) {
      const CapabilitySet subset = CapabilitySet::from_mask(mask);
      Plan p;
      PlanStage s{stage, {}, 0};
      for (CapabilityKind k : kAllCapabilities)
        if (subset.contains(k)) s.invocations.push_back(testing::representative(k));
      p.stages.push_back(std::move(s));
      ASSERT_EQ(validate_plan(p).valid(), subset.is_subset_of(allowed))
          << to_string(stage) << " mask " << mask;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 1.0);
}

TEST(Validate, StageCapabilityIsWarningUnderStandard) {
  ValidationReport r = validate_plan(one_stage(StageKind::BootLiveOS, "Transmit source=accounts",
                                               SoundnessLevel::Standard));
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(has_rule(r, "stage-capability", Severity::Warning));
  ValidationReport s = validate_plan(one_stage(StageKind::BootLiveOS, "Transmit source=accounts"));
  EXPECT_FALSE(s.valid());
  ASSERT_EQ(s.findings.size(), 1u);
  EXPECT_EQ(s.findings[0].stage, StageKind::BootLiveOS);
  EXPECT_EQ(s.findings[0].invocation, 0u);
}

TEST(Validate, StageOrder) {
  Plan p;
  p.stages.push_back({StageKind::AnalyzeApp, {}, 0});
  p.stages.push_back({StageKind::SetupBootloader, {}, 0});
  ValidationReport r = validate_plan(p);
  EXPECT_TRUE(has_rule(r, "stage-order"));
  std::swap(p.stages[0], p.stages[1]);
  EXPECT_TRUE(validate_plan(p).valid());
}

TEST(Validate, NovicePractitionerWarnings) {
  Plan p = testing::reference_plan();
  p.practitioner.experience = Experience::Novice;
  ValidationReport r = validate_plan(p);
  EXPECT_TRUE(r.valid());
  std::size_t warnings = 0;
  for (const auto& f : r.findings) warnings += f.rule == "experience";
  EXPECT_EQ(warnings, 4u);
}

struct RuleCase {
  StageKind stage;
  const char* line;
  const char* rule;
};

TEST(Validate, InvocationRules) {
  const StageKind ex = StageKind::ExaminePrivateStorage;
  const std::vector<RuleCase> cases{
      {ex, "ForensicExamination target=image:userdata method=psychic", "unknown-method"},
      {ex, "ForensicExamination target=image:userdata method=regex-scan pattern=(", "invocation-params"},
      {ex, "ForensicExamination target=image:userdata method=keyword-search", "invocation-params"},
      {ex, "ForensicExamination target=userdata method=path-walk", "invocation-params"},
      {ex, "ForensicExamination target=image:userdata method=path-walk scope=cloud", "invocation-params"},
      {StageKind::AnalyzeApp, "ForensicExamination target=image:userdata method=path-walk scope=app mode=fast",
       "invocation-params"},
      {StageKind::CollectPhysicalImage, "ForensicCopy target=userdata@0+4", "invocation-params"},
      {StageKind::BootLiveOS, "Inject entry=kernel message=text:x", "unknown-entry"},
      {StageKind::SetupBootloader, "Exploit entry=no-such-exploit", "unknown-descriptor"},
      {StageKind::ExamineAccounts, "Transmit source=contacts", "invocation-params"},
      {StageKind::ExamineAccounts, "Modify target=image:userdata message=text:0", "invocation-params"},
      {StageKind::ExamineAccounts,
       "Inject entry=framework message=text:aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa declare=@framework.hook",
       "invocation-params"},
      {StageKind::SetupBootloader,
       "Modify target=@bootloader.live_boot message=text:1 declare=@bootloader.live_boot,@bootloader.live_boot",
       "duplicate-effect"},
  };
  for (const auto& c : cases) {
    ValidationReport r = validate_plan(one_stage(c.stage, c.line));
    EXPECT_TRUE(has_rule(r, c.rule)) << c.line;
  }
}

TEST(Validate, StrictGateRulesOnlyUnderStrict) {
  const std::vector<RuleCase> cases{
      {StageKind::BootLiveOS, "Inject entry=memory message=text:os opaque=true", "strict-gate"},
      {StageKind::SetupBootloader, "Exploit entry=opaque-root", "strict-gate"},
      {StageKind::SetupBootloader,
       "Exploit entry=vendor-unlock-tool declare=@bootloader.live_boot", "strict-gate"},
      {StageKind::SetupBootloader, "Modify target=system@0+1 message=text:1 declare=system@0+1",
       "strict-gate"},
      {StageKind::SetupBootloader,
       "Modify target=@bootloader.live_boot message=text:11 declare=@bootloader.live_boot",
       "strict-gate"},
      {StageKind::SetupBootloader, "Modify target=@bootloader.live_boot message=text:1", "strict-gate"},
      {StageKind::ExamineAccounts, "Inject entry=framework message=text:b", "strict-gate"},
      {StageKind::SetupBootloader,
       "Modify target=@bootloader.verity message=text:1 declare=@bootloader.verity", "noop-modify"},
  };
  for (const auto& c : cases) {
    EXPECT_TRUE(has_rule(validate_plan(one_stage(c.stage, c.line)), c.rule)) << c.line;
    ValidationReport std_report =
        validate_plan(one_stage(c.stage, c.line, SoundnessLevel::Standard));
    EXPECT_TRUE(std_report.valid()) << c.line;
  }
}

}  // namespace
}  // namespace forenskit
