// Acceptance criteria AC1-AC9. One PASS/FAIL line per criterion; exits
// non-zero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "forenskit/cipher.hpp"
#include "forenskit/engine.hpp"
#include "forenskit/error.hpp"
#include "forenskit/report.hpp"
#include "forenskit/validate.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

using Clock = std::chrono::steady_clock;
using testing::oracle_sha256_hex;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond && pass) detail << "first failure: " << what << "; ";
    pass = pass && cond;
  }
};

// AC1 -----------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  using K = CapabilityKind;
  using C = Criterion;
  const CriterionSet etm{C::Errors, C::TransparencyTrustworthiness, C::Meaning};
  const std::vector<std::tuple<StageKind, CapabilitySet, CriterionSet, Adherence>> golden{
      {StageKind::SetupBootloader, {K::Exploit, K::Modify}, etm, Adherence::ImplementationDependent},
      {StageKind::BootLiveOS, {K::Inject}, etm, Adherence::Adheres},
      {StageKind::CollectPhysicalImage, {K::ForensicCopy}, {}, Adherence::NotApplicable},
      {StageKind::ExaminePrivateStorage, {K::ForensicExamination}, {C::Meaning}, Adherence::ExperienceDependent},
      {StageKind::ExamineExternalStorage, {K::ForensicExamination}, {C::Meaning}, Adherence::ExperienceDependent},
      {StageKind::ExamineDatabases, {K::ForensicExamination}, {C::Meaning}, Adherence::ExperienceDependent},
      {StageKind::ExamineAccounts, {K::Inject, K::Modify, K::Transmit}, etm, Adherence::Adheres},
      {StageKind::AnalyzeApp, {K::ForensicExamination}, {C::Meaning}, Adherence::ExperienceDependent},
  };
  for (const auto& [stage, caps, constraints, adherence] : golden) {
    const StageRow& row = canonical_stage_map().lookup(stage);
    o.check(row.allowed == caps && row.key_constraints == constraints && row.adherence == adherence,
            "row " + std::string(to_string(stage)));
  }

  const auto start = Clock::now();
  std::size_t plans = 0;
  for (StageKind stage : kAllStages) {
    const CapabilitySet allowed = canonical_stage_map().lookup(stage).allowed;
    for (std::uint16_t mask = 0; mask < (1u << kCapabilityCount); ++mask) {
      const CapabilitySet subset = CapabilitySet::from_mask(mask);
      Plan p;
      PlanStage s{stage, {}, 0};
      for (CapabilityKind k : kAllCapabilities)
        if (subset.contains(k)) s.invocations.push_back(testing::representative(k));
      p.stages.push_back(std::move(s));
      ++plans;
      o.check(validate_plan(p).valid() == subset.is_subset_of(allowed),
              std::string(to_string(stage)) + " mask " + std::to_string(mask));
    }
  }
  const double secs = seconds_since(start);
  o.check(secs < 1.0, "enumeration took " + std::to_string(secs) + " s");
  o.detail << "8 rows exact, " << plans << " subset plans in " << secs << " s";
  return o;
}

// AC2 -----------------------------------------------------------------------

Outcome ac2() {
  Outcome o;
  const auto start = Clock::now();
  ExecutionResult res = testing::run_reference(testing::default_fixture(), 7);
  const double secs = seconds_since(start);
  o.check(res.executed(), "reference plan did not run");
  if (!o.pass) return o;
  FeatureMatrix m = feature_matrix(*res.trace);
  o.check(!m.rooted_required, "rooted_required");
  o.check(m.partition_flashed == FlashState::None, "partition_flashed");
  o.check(m.bit_for_bit_copy, "bit_for_bit_copy");
  o.check(m.secure_credentials_collected, "secure_credentials_collected");
  o.check(!m.sdcard_required, "sdcard_required");
  o.check(m.analyzes_data, "analyzes_data");
  o.check(secs < 5.0, "runtime");
  o.detail << "matrix (" << (m.rooted_required ? "rooted" : "no root") << ", flash "
           << to_string(m.partition_flashed) << ", bit-for-bit " << m.bit_for_bit_copy
           << ", creds " << m.secure_credentials_collected << ", sdcard " << m.sdcard_required
           << ", analyzes " << m.analyzes_data << ") in " << secs << " s";
  return o;
}

// AC3 -----------------------------------------------------------------------

Outcome ac3() {
  Outcome o;
  const FixtureManifest manifest = testing::default_fixture();
  const Device initial = Device::build(manifest, 7);
  ExecutionResult res = testing::run_reference(manifest, 7);
  o.check(res.executed(), "reference plan did not run");
  if (!o.pass) return o;
  const Device& final_dev = *res.device;

  std::set<Region> ledger_regions;
  for (const auto& c : res.trace->ledger) ledger_regions.insert(c.region);
  std::set<Region> declared;
  for (const auto& r : res.trace->records)
    for (const auto& text : r.declared_regions) declared.insert(final_dev.resolve(RegionRef::parse(text)));
  o.check(ledger_regions == declared, "ledger region set differs from declared set");

  std::size_t evidential = 0;
  for (const Region& ev : initial.evidential_map()) {
    ++evidential;
    const Bytes& before = initial.partition(ev.store);
    const Bytes& after = final_dev.partition(ev.store);
    o.check(before.size() == after.size(), ev.store + " changed size");
    if (before.size() != after.size()) continue;
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (before[i] == after[i]) continue;
      const Region byte{ev.store, i, 1};
      const bool covered = std::any_of(declared.begin(), declared.end(),
                                       [&](const Region& d) { return d.covers(byte); });
      o.check(covered, "undeclared change in " + byte.to_string());
      if (!covered) break;
    }
    o.check(oracle_sha256_hex(before) == res.trace->initial_digests.at(ev.store).hex(),
            "initial digest of " + ev.store);
  }
  o.detail << evidential << " evidential partitions checked; " << ledger_regions.size()
           << " ledger regions == " << declared.size() << " declared regions";
  return o;
}

// AC4 -----------------------------------------------------------------------

std::string collection_prefix(SoundnessLevel level) {
  Plan p = testing::reference_plan();
  p.level = level;
  p.stages.resize(3);  // SetupBootloader, BootLiveOS, CollectPhysicalImage
  return render_plan(p);
}

Outcome ac4() {
  Outcome o;
  std::size_t clean_copies = 0;
  const Plan strict_prefix = parse_plan(collection_prefix(SoundnessLevel::Strict));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    FixtureManifest m = generate_manifest(5000 + seed, 1 + seed % 4);
    ExecuteOptions opts;
    opts.seed = seed;
    ExecutionResult res = execute_plan(strict_prefix, Device::build(m, seed), opts);
    o.check(res.executed(), "seed " + std::to_string(seed) + " did not run");
    if (!res.executed()) continue;
    for (const auto& r : res.trace->records) {
      if (r.invocation.kind != CapabilityKind::ForensicCopy) continue;
      const std::string& part = r.invocation.target_data->text();
      const std::string independent = oracle_sha256_hex(res.device->partition(part));
      o.check(r.status == InvocationStatus::Completed, "copy of " + part + " failed");
      o.check(r.output_digest && r.output_digest->hex() == independent, "digest of " + part);
      const WorkstationItem* item = res.workstation->find(r.output_item);
      o.check(item && oracle_sha256_hex(item->data) == independent, "image of " + part);
      ++clean_copies;
    }
  }

  std::size_t copies = 0, injected = 0, caught = 0, admitted_bad = 0;
  const Plan standard_prefix = parse_plan(collection_prefix(SoundnessLevel::Standard));
  for (std::uint64_t seed = 0; copies < 200 || seed < 40; ++seed) {
    FixtureManifest m = generate_manifest(9000 + seed, 2);
    ExecuteOptions opts;
    opts.seed = seed;
    opts.fault = FaultConfig{seed * 7919 + 1, 0.1};
    ExecutionResult res = execute_plan(standard_prefix, Device::build(m, seed), opts);
    if (!res.executed()) {
      o.check(false, "fault run did not execute");
      break;
    }
    for (const auto& r : res.trace->records) {
      if (r.invocation.kind != CapabilityKind::ForensicCopy) continue;
      ++copies;
      if (r.fault_injected) {
        ++injected;
        if (r.status == InvocationStatus::Failed && r.error == ErrorCode::DigestMismatch &&
            r.output_item.empty())
          ++caught;
      }
    }
    for (const WorkstationItem* item : res.workstation->items())
      if (item->kind == ItemKind::Image &&
          oracle_sha256_hex(item->data) != oracle_sha256_hex(res.device->partition(item->label)))
        ++admitted_bad;
  }
  o.check(copies >= 200, "fewer than 200 copies");
  o.check(injected > 0, "no faults injected");
  o.check(caught == injected, "uncaught corruption");
  o.check(admitted_bad == 0, "corrupted image admitted");
  o.detail << clean_copies << " copies over 100 fixtures match independent digests; fault rate 0.1: "
           << copies << " copies, " << injected << " injected, " << caught << " caught, "
           << admitted_bad << " admitted mismatches";
  return o;
}

// AC5 -----------------------------------------------------------------------

Outcome ac5() {
  Outcome o;
  const std::string text =
      "level strict\n"
      "stage SetupBootloader {\n"
      "  invoke Delete target=userdata@0+16 declare=userdata@0+16\n"
      "  invoke Exploit entry=opaque-root\n"
      "}\n";
  Plan plan = parse_plan(text);
  const Device device = Device::build(testing::default_fixture(), 7);

  o.check(!validate_plan(plan).valid(), "strict validation accepted the plan");
  o.check(!execute_plan(plan, device).executed(), "strict plan executed");

  // Gate path, bypassing static validation.
  Engine engine(device, EngineConfig{SoundnessLevel::Strict, plan.practitioner, {}});
  const Bytes before = device.serialize();
  for (const auto& inv : plan.stages[0].invocations) {
    auto r = engine.invoke(inv);
    o.check(r.record.status == InvocationStatus::Rejected,
            std::string(to_string(inv.kind)) + " not rejected");
  }
  o.check(engine.device().serialize() == before, "device changed after strict rejection");

  plan.level = SoundnessLevel::Standard;
  ExecutionResult res = execute_plan(plan, device);
  o.check(res.executed(), "standard plan did not run");
  if (!res.executed()) return o;
  const auto& recs = res.trace->records;
  o.check(recs.size() == 2, "standard run record count");
  for (const auto& r : recs) o.check(r.status == InvocationStatus::Completed, "standard invocation incomplete");
  const SoundnessReport rep = soundness_report(*res.trace, SoundnessLevel::Standard);
  auto cites = [&](Criterion c, std::uint64_t seq) {
    const auto& a = rep.at(c);
    return a.status == CriterionStatus::Violated &&
           std::find(a.citations.begin(), a.citations.end(), seq) != a.citations.end();
  };
  o.check(cites(Criterion::Errors, 1), "Errors not violated citing Delete");
  o.check(cites(Criterion::Meaning, 1), "Meaning not violated citing Delete");
  o.check(cites(Criterion::TransparencyTrustworthiness, 2), "TT not violated citing Exploit");
  o.detail << "strict: validation and gate reject both, device byte-identical; standard: "
           << "Errors/Meaning cite #1, TransparencyTrustworthiness cites #2";
  return o;
}

// AC6 -----------------------------------------------------------------------

Outcome ac6() {
  Outcome o;
  std::size_t manifests = 0, artifacts = 0, decrypted = 0, misses = 0, phantoms = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    FixtureManifest m = generate_manifest(20000 + seed, 1 + seed % 6);
    ExecutionResult res = testing::run_reference(m, seed);
    o.check(res.executed(), "seed " + std::to_string(seed) + " did not run");
    if (!res.executed()) continue;
    const auto observed = testing::observed_artifacts(res.trace->artifacts);
    const auto expected = testing::expected_artifacts(m);
    std::multiset<testing::ArtifactTuple> diff;
    std::set_difference(expected.begin(), expected.end(), observed.begin(), observed.end(),
                        std::inserter(diff, diff.end()));
    misses += diff.size();
    diff.clear();
    std::set_difference(observed.begin(), observed.end(), expected.begin(), expected.end(),
                        std::inserter(diff, diff.end()));
    phantoms += diff.size();
    artifacts += expected.size();
    for (const auto& t : expected) decrypted += std::get<4>(t) == "decrypted";
    ++manifests;
  }
  o.check(manifests >= 50, "fewer than 50 manifests");
  o.check(misses == 0, "misses");
  o.check(phantoms == 0, "phantoms");
  o.detail << manifests << " manifests, " << artifacts << " planted artifacts (" << decrypted
           << " decrypted files), " << misses << " misses, " << phantoms << " phantoms";
  return o;
}

// AC7 -----------------------------------------------------------------------

Outcome ac7() {
  Outcome o;
  // Reference plan with the framework bypass removed: Transmit only.
  Plan denied = testing::reference_plan();
  for (auto& s : denied.stages)
    if (s.kind == StageKind::ExamineAccounts) s.invocations.erase(s.invocations.begin(), s.invocations.end() - 1);

  std::size_t fixtures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FixtureManifest m = generate_manifest(30000 + seed, 1 + seed % 4);
    ++fixtures;

    ExecutionResult no = execute_plan(denied, Device::build(m, seed));
    o.check(no.executed(), "plan without bypass did not run");
    if (no.executed()) {
      const AuditRecord& last = no.trace->records.back();
      o.check(last.invocation.kind == CapabilityKind::Transmit &&
                  last.error == ErrorCode::AccessDenied,
              "transmit without bypass not denied");
      try {
        extraction::extract_accounts(*no.device, no.trace->records);
        o.check(false, "extract_accounts succeeded without bypass");
      } catch (const Error& e) {
        o.check(e.code() == ErrorCode::AccessDenied, "wrong error without bypass");
      }
    }

    ExecutionResult yes = testing::run_reference(m, seed);
    o.check(yes.executed(), "reference did not run");
    if (!yes.executed()) continue;
    try {
      auto creds = extraction::extract_accounts(*yes.device, yes.trace->records);
      std::size_t expected = 0;
      for (const auto& t : testing::expected_artifacts(m)) expected += std::get<4>(t) == "accounts";
      o.check(creds.size() == expected, "credential count");
    } catch (const Error& e) {
      o.check(false, std::string("extract_accounts failed with bypass: ") + e.what());
    }
  }
  o.detail << fixtures << " fixtures: AccessDenied without bypass, full credentials with it";
  return o;
}

// AC8 -----------------------------------------------------------------------

Outcome ac8() {
  Outcome o;
  std::size_t pairs = 0;
  std::string sample;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FixtureManifest m = generate_manifest(40000 + seed, 3);
    const FaultConfig fault{seed, seed % 2 ? 0.2 : 0.0};
    auto a = testing::run_reference(m, seed, fault);
    auto b = testing::run_reference(m, seed, fault);
    o.check(a.executed() && b.executed(), "run failed");
    if (!a.executed() || !b.executed()) continue;
    const std::string la = custody_jsonl(*a.trace);
    o.check(la == custody_jsonl(*b.trace), "audit.jsonl differs for seed " + std::to_string(seed));
    ++pairs;
    if (sample.empty()) sample = la;
  }
  std::size_t mutations = 0, detected = 0;
  o.check(verify_custody(sample), "untampered log fails verification");
  std::string copy = sample;
  for (std::size_t i = 0; i < copy.size(); ++i) {
    const char saved = copy[i];
    for (unsigned char delta : {0x01, 0x80}) {
      copy[i] = static_cast<char>(saved ^ delta);
      ++mutations;
      detected += !verify_custody(copy);
    }
    copy[i] = saved;
  }
  o.check(detected == mutations, "undetected mutation");
  o.detail << pairs << " replay pairs byte-identical; " << detected << "/" << mutations
           << " single-byte mutations detected";
  return o;
}

// AC9 -----------------------------------------------------------------------

Outcome ac9(Clock::time_point suite_start) {
  Outcome o;
  testing::PlanGen gen(99);
  std::size_t plans = 0;
  for (int i = 0; i < 1000; ++i) {
    Plan p = gen.plan();
    const std::string text = render_plan(p);
    bool ok = false;
    try {
      ok = parse_plan(text) == p;
    } catch (const Error&) {
    }
    o.check(ok, "plan round trip " + std::to_string(i));
    plans += ok;
  }
  std::mt19937_64 rng(4242);
  std::size_t ciphers = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes data(rng() % 512);
    for (auto& x : data) x = static_cast<std::uint8_t>(rng());
    Bytes key(1 + rng() % 32);
    for (auto& x : key) x = static_cast<std::uint8_t>(rng());
    const Bytes enc = encrypt_decrypt(data, key, CipherDirection::Encrypt);
    const bool ok = enc == testing::oracle_xor(data, key) &&
                    encrypt_decrypt(enc, key, CipherDirection::Decrypt) == data;
    o.check(ok, "cipher round trip " + std::to_string(i));
    ciphers += ok;
  }
  const double secs = seconds_since(suite_start);
  o.check(secs < 30.0, "acceptance runtime");
  o.detail << plans << "/1000 plan and " << ciphers << "/1000 cipher round trips; acceptance run "
           << secs << " s (full ctest time in the ctest summary)";
  return o;
}

}  // namespace
}  // namespace forenskit

int main() {
  using namespace forenskit;
  const auto start = Clock::now();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", [&] { return ac9(start); }},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s %s: %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
