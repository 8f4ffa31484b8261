#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forenskit/error.hpp"
#include "forenskit/invocation.hpp"
#include "forenskit/model.hpp"
#include "forenskit/region.hpp"

namespace forenskit {

enum class Verdict : std::uint8_t { Allow, Reject };

struct GateDecision {
  Verdict verdict = Verdict::Allow;
  CriterionSet violated;
  std::vector<std::string> reasons;

  bool operator==(const GateDecision&) const = default;
};

enum class InvocationStatus : std::uint8_t {
  Completed,
  Rejected,  // by the gate, or rolled back after a declaration mismatch
  Failed,    // domain error (digest mismatch, access denied, ...)
};

std::string_view to_string(Verdict v);
std::string_view to_string(InvocationStatus s);

/// One entry of the execution trace. Exactly one per invocation.
struct AuditRecord {
  std::uint64_t seq = 0;
  std::uint64_t tick = 0;
  std::optional<StageKind> stage;
  CapabilityInvocation invocation;
  Digest params_digest;
  GateDecision decision;
  InvocationStatus status = InvocationStatus::Completed;
  std::optional<ErrorCode> error;
  std::string error_message;

  std::vector<std::uint64_t> change_seqs;
  std::vector<Region> actual_regions;
  std::vector<std::string> declared_regions;
  std::map<std::string, Digest> pre_digests;
  std::map<std::string, Digest> post_digests;
  std::optional<Digest> source_digest;
  std::optional<Digest> output_digest;
  std::string output_item;  // workstation id of admitted output

  PractitionerProfile practitioner;
  bool opaque = false;
  bool fault_injected = false;
  bool rolled_back = false;
  bool derived = false;  // issued by the executor rather than written in the plan
  std::optional<std::uint64_t> corrupt_ref;
  std::vector<std::string> notes;

  bool operator==(const AuditRecord&) const = default;
};

}  // namespace forenskit
