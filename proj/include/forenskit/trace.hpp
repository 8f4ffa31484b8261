#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forenskit/artifact.hpp"
#include "forenskit/audit.hpp"
#include "forenskit/device.hpp"
#include "forenskit/plan.hpp"
#include "forenskit/workstation.hpp"

namespace forenskit {

struct StageOutcome {
  StageKind stage = StageKind::SetupBootloader;
  std::vector<std::uint64_t> seqs;
  bool reached = false;
  bool completed = false;  // every record completed

  bool operator==(const StageOutcome&) const = default;
};

struct WorkstationEntry {
  std::string id;
  ItemKind kind = ItemKind::Image;
  std::string label;
  Digest digest;
  std::uint64_t size = 0;
  std::uint64_t source_seq = 0;

  bool operator==(const WorkstationEntry&) const = default;
};

/// Everything a plan execution produced. Sufficient input for every report.
struct ExecutionTrace {
  Plan plan;
  std::uint64_t seed = 0;
  std::string digest_algorithm;
  std::vector<AuditRecord> records;
  std::vector<Artifact> artifacts;
  std::vector<FileMetadataRecord> metadata;
  std::vector<StageOutcome> stages;
  std::vector<ChangeRecord> ledger;
  std::map<std::string, Digest> initial_digests;
  std::map<std::string, Digest> final_digests;
  std::vector<std::string> partitions;
  std::map<std::string, Region> named_regions;
  std::vector<WorkstationEntry> workstation;
  bool halted = false;
  std::optional<std::uint64_t> halted_at;

  SoundnessLevel level() const { return plan.level; }
  const PractitionerProfile& practitioner() const { return plan.practitioner; }
  const AuditRecord* record(std::uint64_t seq) const;

  bool operator==(const ExecutionTrace&) const = default;
};

}  // namespace forenskit
