#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forenskit/bytes.hpp"
#include "forenskit/model.hpp"
#include "forenskit/region.hpp"

namespace forenskit {

/// Binary message with a transparency flag. An opaque payload is one whose
/// effects cannot be reported on.
struct Payload {
  Bytes data;
  bool opaque = false;

  bool operator==(const Payload&) const = default;
};

struct DeclaredEffect {
  RegionRef region;
  /// Digest the region is expected to hold afterwards, when known.
  std::optional<Digest> after_digest;

  bool operator==(const DeclaredEffect&) const = default;
};

/// One use of a capability with its parameters. Options carry the
/// examination/transfer knobs that are not part of the capability signature
/// (app, mode, pattern, source, direction).
struct CapabilityInvocation {
  CapabilityKind kind = CapabilityKind::Corrupt;
  std::string target_device = "device";
  std::optional<RegionRef> target_data;
  std::optional<Bytes> key;
  std::optional<std::string> entry_point;
  std::optional<Payload> message;
  std::optional<std::string> method;
  std::vector<DeclaredEffect> declared_effects;
  std::map<std::string, std::string> options;

  std::string option(const std::string& name, const std::string& fallback = {}) const {
    auto it = options.find(name);
    return it == options.end() ? fallback : it->second;
  }

  bool operator==(const CapabilityInvocation&) const = default;
};

/// Problems with the parameters the invocation's kind requires. Empty when
/// the invocation is well formed.
std::vector<std::string> check_well_formed(const CapabilityInvocation& inv);

/// Digest over a canonical rendering of every parameter.
Digest params_digest(const CapabilityInvocation& inv);

}  // namespace forenskit
