#include <gtest/gtest.h>

#include "forenskit/executor.hpp"
#include "forenskit/fixtures.hpp"
#include "forenskit/serialize.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

const char* kCopyOnly =
    "level strict\n"
    "stage CollectPhysicalImage {\n  invoke ForensicCopy partition=all\n}\n";

TEST(Executor, InvalidPlanDoesNotRun) {
  Plan p = parse_plan("stage BootLiveOS {\n  invoke Transmit source=accounts\n}\n");
  ExecutionResult res = execute_plan(p, Device::build(testing::default_fixture(), 1));
  EXPECT_FALSE(res.validation.valid());
  EXPECT_FALSE(res.executed());
}

TEST(Executor, StrictHaltsAtFirstFailure) {
  Plan p = parse_plan(kCopyOnly);
  ExecutionResult res = execute_plan(p, Device::build(testing::default_fixture(), 1));
  ASSERT_TRUE(res.executed());
  const ExecutionTrace& t = *res.trace;
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].error, ErrorCode::LiveOsRequired);
  EXPECT_TRUE(t.halted);
  EXPECT_EQ(t.halted_at, 1u);
  ASSERT_EQ(t.stages.size(), 1u);
  EXPECT_TRUE(t.stages[0].reached);
  EXPECT_FALSE(t.stages[0].completed);
}

TEST(Executor, StandardContinuesAndExpandsAllPartitions) {
  Plan p = parse_plan(kCopyOnly);
  p.level = SoundnessLevel::Standard;
  Device d = Device::build(testing::default_fixture(), 1);
  const auto partitions = d.partition_names();
  ExecutionResult res = execute_plan(p, std::move(d));
  ASSERT_TRUE(res.executed());
  EXPECT_FALSE(res.trace->halted);
  ASSERT_EQ(res.trace->records.size(), partitions.size());
  for (std::size_t i = 0; i < partitions.size(); ++i)
    EXPECT_EQ(res.trace->records[i].invocation.target_data->text(), partitions[i]);
}

TEST(Executor, ReferenceRunCompletes) {
  FixtureManifest m = testing::default_fixture();
  ExecutionResult res = testing::run_reference(m, 7);
  ASSERT_TRUE(res.executed());
  const ExecutionTrace& t = *res.trace;
  EXPECT_FALSE(t.halted);
  for (const auto& r : t.records)
    EXPECT_EQ(r.status, InvocationStatus::Completed) << r.seq << " " << r.error_message;
  for (const auto& s : t.stages) EXPECT_TRUE(s.reached && s.completed) << to_string(s.stage);

  std::size_t copies = 0, derived = 0, encrypted = 0;
  for (const auto& r : t.records) {
    copies += r.invocation.kind == CapabilityKind::ForensicCopy;
    if (r.derived) {
      ++derived;
      EXPECT_EQ(r.invocation.kind, CapabilityKind::EncryptDecrypt);
      EXPECT_EQ(r.stage, StageKind::ExamineExternalStorage);
    }
  }
  for (const auto& a : m.apps) encrypted += a.encrypted_files.size();
  EXPECT_EQ(copies, res.device->partition_names().size());
  EXPECT_EQ(derived, encrypted);
  EXPECT_EQ(t.ledger, res.device->ledger());
  EXPECT_EQ(t.final_digests, res.device->digest_all());
  EXPECT_EQ(t.workstation.size(), res.workstation->size());
}

TEST(Executor, DeterministicAcrossRuns) {
  FixtureManifest m = generate_manifest(11, 4);
  FaultConfig fault{5, 0.2};
  auto a = testing::run_reference(m, 3, fault);
  auto b = testing::run_reference(m, 3, fault);
  ASSERT_TRUE(a.executed() && b.executed());
  EXPECT_EQ(*a.trace, *b.trace);
  EXPECT_EQ(to_json(*a.trace).dump(), to_json(*b.trace).dump());
}

TEST(Executor, TraceJsonRoundTrip) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto res = testing::run_reference(generate_manifest(seed, 3), seed, FaultConfig{seed, 0.3});
    ASSERT_TRUE(res.executed());
    ExecutionTrace back = trace_from_json(to_json(*res.trace));
    EXPECT_EQ(back, *res.trace);
  }
  EXPECT_THROW(trace_from_json(nlohmann::json::parse(R"({"format":"other"})")), Error);
}

TEST(Executor, RevalidateOffLetsGateDecide) {
  Plan p = parse_plan(
      "level strict\nstage SetupBootloader {\n  invoke Exploit entry=opaque-root\n}\n");
  Device d = Device::build(testing::default_fixture(), 1);
  const Bytes before = d.serialize();
  EXPECT_FALSE(execute_plan(p, d).executed());
  ExecuteOptions opts;
  opts.revalidate = false;
  ExecutionResult res = execute_plan(p, d, opts);
  ASSERT_TRUE(res.executed());
  EXPECT_EQ(res.trace->records.at(0).status, InvocationStatus::Rejected);
  EXPECT_EQ(res.device->serialize(), before);
}

}  // namespace
}  // namespace forenskit
