#pragma once

// JSON form of audit records and execution traces. Round trips are exact.

#include <string>

#include <json.hpp>

#include "forenskit/audit.hpp"
#include "forenskit/trace.hpp"

namespace forenskit {

nlohmann::json invocation_to_json(const CapabilityInvocation& inv);
CapabilityInvocation invocation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AuditRecord& record);
AuditRecord audit_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExecutionTrace& trace);
/// Throws Error(Parse) on malformed input.
ExecutionTrace trace_from_json(const nlohmann::json& j);

void save_trace(const ExecutionTrace& trace, const std::string& path);
/// Throws Error(Io) or Error(Parse).
ExecutionTrace load_trace(const std::string& path);

std::optional<ErrorCode> parse_error_code(std::string_view name);

}  // namespace forenskit
