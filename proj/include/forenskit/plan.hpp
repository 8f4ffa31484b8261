#pragma once

// Methodology plans: a soundness level, a practitioner, and an ordered list
// of stages holding capability invocations.
//
//   # comment
//   level strict
//   practitioner examiner-01 competent
//   stage CollectPhysicalImage {
//     invoke ForensicCopy partition=userdata
//   }
//
// Invocation parameters are key=value tokens. Values may be double-quoted
// (escapes: \" \\ \n \t). Byte values take a text: or hex: prefix.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forenskit/invocation.hpp"
#include "forenskit/model.hpp"

namespace forenskit {

struct PlanStage {
  StageKind kind = StageKind::SetupBootloader;
  std::vector<CapabilityInvocation> invocations;
  std::size_t line = 0;  // source position, not part of equality

  bool operator==(const PlanStage& o) const {
    return kind == o.kind && invocations == o.invocations;
  }
};

struct Plan {
  SoundnessLevel level = SoundnessLevel::Strict;
  PractitionerProfile practitioner;
  std::vector<PlanStage> stages;

  bool operator==(const Plan&) const = default;
};

/// Throws ParseError with a 1-based line and column.
Plan parse_plan(std::string_view text);
/// Throws Error(Io) when the file cannot be read, ParseError otherwise.
Plan load_plan(const std::string& path);
std::string render_plan(const Plan& plan);

using Params = std::vector<std::pair<std::string, std::string>>;

/// Keys accepted in invocation parameters.
const std::vector<std::string>& plan_parameter_keys();

/// Canonical key=value rendering of an invocation (values unquoted).
Params encode_params(const CapabilityInvocation& inv);
/// Inverse of encode_params. Throws Error(InvalidArgument) naming the key.
CapabilityInvocation decode_params(CapabilityKind kind, const Params& params);

std::string encode_bytes(ByteView bytes);
Bytes decode_bytes(std::string_view value);

}  // namespace forenskit
