#include "forenskit/executor.hpp"

#include "forenskit/layout.hpp"

namespace forenskit {

const AuditRecord* ExecutionTrace::record(std::uint64_t seq) const {
  for (const auto& r : records)
    if (r.seq == seq) return &r;
  return nullptr;
}

namespace {

std::vector<CapabilityInvocation> expand(const CapabilityInvocation& inv, const Device& device) {
  if (inv.kind == CapabilityKind::ForensicCopy && inv.target_data &&
      inv.target_data->form() == RegionRef::Form::Partition && inv.target_data->name() == "all") {
    std::vector<CapabilityInvocation> out;
    for (const auto& name : device.partition_names()) {
      CapabilityInvocation copy = inv;
      copy.target_data = RegionRef::parse(name);
      out.push_back(std::move(copy));
    }
    return out;
  }
  return {inv};
}

const Artifact* find_key(const std::vector<Artifact>& artifacts, const layout::KeyRef& hint) {
  const std::string path = layout::private_dir(hint.app_id) + hint.path;
  for (const auto& a : artifacts)
    if (a.kind == ArtifactKind::EncryptionKey && a.app_id == hint.app_id &&
        a.label == hint.key_id && a.path == path)
      return &a;
  return nullptr;
}

class Runner {
 public:
  Runner(const Plan& plan, Device device, const ExecuteOptions& options)
      : plan_(plan),
        initial_(device.digest_all()),
        engine_(std::move(device), EngineConfig{plan.level, plan.practitioner, options.fault}) {
    trace_.plan = plan;
    trace_.seed = options.seed;
    trace_.digest_algorithm = engine_.device().digest_algorithm();
    trace_.initial_digests = initial_;
    trace_.partitions = engine_.device().partition_names();
    trace_.named_regions = engine_.device().named_regions();
  }

  ExecutionResult run() {
    const bool strict = plan_.level == SoundnessLevel::Strict;
    for (const PlanStage& stage : plan_.stages) {
      StageOutcome outcome{stage.kind, {}, !trace_.halted, !trace_.halted};
      for (const auto& planned : stage.invocations) {
        if (trace_.halted) break;
        for (const auto& inv : expand(planned, engine_.device())) {
          InvocationResult res = engine_.invoke(inv, {stage.kind, false});
          outcome.seqs.push_back(res.record.seq);
          const bool ok = res.record.status == InvocationStatus::Completed;
          if (!ok) outcome.completed = false;
          if (ok) absorb(stage.kind, res, outcome);
          if (!ok && strict) {
            trace_.halted = true;
            trace_.halted_at = res.record.seq;
            break;
          }
        }
      }
      trace_.stages.push_back(std::move(outcome));
    }

    trace_.records = engine_.audit_log();
    trace_.ledger = engine_.device().ledger();
    trace_.final_digests = engine_.device().digest_all();
    for (const WorkstationItem* item : engine_.workstation().items())
      trace_.workstation.push_back(
          {item->id, item->kind, item->label, item->digest, item->data.size(), item->source_seq});

    ExecutionResult result;
    result.trace = std::move(trace_);
    result.device = engine_.device();
    result.workstation = engine_.workstation();
    return result;
  }

 private:
  void absorb(StageKind stage, InvocationResult& res, StageOutcome& outcome) {
    auto& ex = res.examination;
    const std::size_t first_new = trace_.artifacts.size();
    trace_.artifacts.insert(trace_.artifacts.end(), ex.artifacts.begin(), ex.artifacts.end());
    trace_.metadata.insert(trace_.metadata.end(), ex.metadata.begin(), ex.metadata.end());

    if (res.record.invocation.kind != CapabilityKind::ForensicExamination) return;
    if (stage == StageKind::ExamineExternalStorage) decrypt_new(stage, first_new, outcome);
    if (!ex.semantics.empty()) extraction::apply_semantics(trace_.artifacts, ex.semantics);
  }

  /// Issues derived decryptions for encrypted artifacts added since `from`.
  void decrypt_new(StageKind stage, std::size_t from, StageOutcome& outcome) {
    const std::size_t end = trace_.artifacts.size();
    for (std::size_t i = from; i < end; ++i) {
      const Artifact source = trace_.artifacts[i];
      if (!source.encrypted || !source.key_hint) continue;
      const Artifact* key = find_key(trace_.artifacts, *source.key_hint);
      if (!key) continue;
      CapabilityInvocation inv;
      inv.kind = CapabilityKind::EncryptDecrypt;
      inv.target_data = RegionRef::parse("workstation:" + source.provenance.source);
      inv.key = key->value;
      inv.options["path"] = source.path;
      inv.options["direction"] = "decrypt";
      inv.options["name"] = "decrypted-" + source.app_id;
      InvocationResult res = engine_.invoke(inv, {stage, true});
      outcome.seqs.push_back(res.record.seq);
      if (res.record.status != InvocationStatus::Completed) {
        outcome.completed = false;
        continue;
      }
      trace_.artifacts.push_back(
          extraction::decrypted_artifact(source, res.record.output_item, res.output));
    }
  }

  const Plan& plan_;
  std::map<std::string, Digest> initial_;
  Engine engine_;
  ExecutionTrace trace_;
};

}  // namespace

ExecutionResult execute_plan(const Plan& plan, Device device, const ExecuteOptions& options) {
  ExecutionResult result;
  if (options.revalidate) {
    ValidationReport report = validate_plan(plan);
    if (!report.valid()) {
      result.validation = std::move(report);
      return result;
    }
    Runner runner(plan, std::move(device), options);
    ExecutionResult run = runner.run();
    run.validation = std::move(report);
    return run;
  }
  return Runner(plan, std::move(device), options).run();
}

}  // namespace forenskit
