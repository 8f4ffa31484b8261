#pragma once

// Capability engine: gates each invocation against the soundness level,
// executes it against the device or the workstation, and appends exactly
// one audit record per invocation.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "forenskit/audit.hpp"
#include "forenskit/descriptors.hpp"
#include "forenskit/device.hpp"
#include "forenskit/extraction.hpp"
#include "forenskit/workstation.hpp"

namespace forenskit {

/// Seeded transfer-corruption hook for copy and transmit.
struct FaultConfig {
  std::uint64_t seed = 0;
  double rate = 0.0;

  bool enabled() const { return rate > 0.0; }
  /// FORENSKIT_FAULT_SEED / FORENSKIT_FAULT_RATE; unset means disabled.
  static FaultConfig from_env();
};

struct EngineConfig {
  SoundnessLevel level = SoundnessLevel::Strict;
  PractitionerProfile practitioner;
  FaultConfig fault;
};

struct InvokeContext {
  std::optional<StageKind> stage;
  bool derived = false;
};

struct InvocationResult {
  AuditRecord record;
  std::optional<DeviceSnapshot> snapshot;    // Corrupt
  std::vector<Bytes> messages;               // Listen
  extraction::ExaminationResult examination; // ForensicExamination, Transmit(accounts)
  Bytes output;                              // EncryptDecrypt
};

/// Device regions an invocation will write, as far as can be known before
/// running it. Throws Error for unresolvable targets or unknown descriptors.
std::vector<Region> predict_effects(const CapabilityInvocation& inv, const Device& device,
                                    const DescriptorRegistry& registry = bundled_descriptors());

GateDecision gate(const CapabilityInvocation& inv, SoundnessLevel level, const Device& device,
                  const DescriptorRegistry& registry = bundled_descriptors());

class Engine {
 public:
  Engine(Device device, EngineConfig config,
         const DescriptorRegistry& registry = bundled_descriptors());

  /// Never throws for domain errors; they are reported in the record.
  InvocationResult invoke(const CapabilityInvocation& inv, const InvokeContext& ctx = {});

  const Device& device() const { return device_; }
  const Workstation& workstation() const { return workstation_; }
  const std::vector<AuditRecord>& audit_log() const { return log_; }
  const EngineConfig& config() const { return config_; }
  std::uint64_t faults_injected() const { return faults_injected_; }

 private:
  void execute(Device& dev, const CapabilityInvocation& inv, const InvokeContext& ctx,
               InvocationResult& result);
  /// Copies `data` across the simulated transfer path, possibly corrupting it.
  Bytes transfer(const Bytes& data, bool& injected);

  Device device_;
  EngineConfig config_;
  const DescriptorRegistry& registry_;
  Workstation workstation_;
  std::vector<AuditRecord> log_;
  std::mt19937_64 fault_rng_;
  std::uint64_t faults_injected_ = 0;
  std::optional<std::uint64_t> last_corrupt_;
};

}  // namespace forenskit
