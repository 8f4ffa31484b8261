#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forenskit/descriptors.hpp"
#include "forenskit/model.hpp"
#include "forenskit/plan.hpp"

namespace forenskit {

enum class Severity : std::uint8_t { Error, Warning };

/// Rule ids: stage-capability, stage-order, strict-gate, invocation-params,
/// unknown-method, unknown-descriptor, unknown-entry, duplicate-effect,
/// noop-modify (errors); experience (warning). stage-capability is a
/// warning under the standard level.
struct ValidationFinding {
  std::optional<StageKind> stage;
  std::optional<std::size_t> invocation;  // index within the stage
  Severity severity = Severity::Error;
  std::string rule;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;

  bool valid() const;
  std::size_t error_count() const;
};

/// Pure. Static checks over-approximate the runtime gate for the bundled
/// descriptors: a plan valid under strict is never gate-rejected.
ValidationReport validate_plan(const Plan& plan,
                               const ConstraintTable& table = canonical_constraint_table(),
                               const StageMap& stages = canonical_stage_map(),
                               const DescriptorRegistry& registry = bundled_descriptors());

}  // namespace forenskit
