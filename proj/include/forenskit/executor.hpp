#pragma once

#include <optional>

#include "forenskit/engine.hpp"
#include "forenskit/trace.hpp"
#include "forenskit/validate.hpp"

namespace forenskit {

struct ExecuteOptions {
  bool revalidate = true;
  FaultConfig fault;
  std::uint64_t seed = 0;  // recorded in the trace
};

struct ExecutionResult {
  ValidationReport validation;
  /// Absent when validation failed and nothing ran.
  std::optional<ExecutionTrace> trace;
  std::optional<Device> device;
  std::optional<Workstation> workstation;

  bool executed() const { return trace.has_value(); }
};

/// Runs the plan stage by stage through a fresh engine. Under strict the
/// run halts at the first rejected or failed invocation; under standard it
/// continues. Encrypted external data whose key has been recovered is
/// decrypted by derived invocations, and app analysis semantics are applied
/// to every collected artifact.
ExecutionResult execute_plan(const Plan& plan, Device device, const ExecuteOptions& options = {});

}  // namespace forenskit
