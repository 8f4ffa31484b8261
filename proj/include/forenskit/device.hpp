#pragma once

// In-memory simulated handset: flash partitions, a volatile memory region,
// bootloader state, an OS accounts store guarded by a framework signature
// check, communication channels, and an append-only change ledger recording
// every effective write at byte-range granularity.
//
// A Device is a single-owner mutable value. Copying it yields an independent
// device (used for transactional execution).

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "forenskit/bytes.hpp"
#include "forenskit/digest.hpp"
#include "forenskit/manifest.hpp"
#include "forenskit/region.hpp"

namespace forenskit {

struct ChangeRecord {
  std::uint64_t seq = 0;
  std::uint64_t tick = 0;
  Region region;
  Digest before_digest;  // of the region bytes, not the partition
  Digest after_digest;
  std::string cause;

  bool operator==(const ChangeRecord&) const = default;
};

struct BootloaderState {
  bool locked = true;
  bool allow_unsigned_boot = false;  // volatile
  std::set<std::string> signed_keys;

  bool operator==(const BootloaderState&) const = default;
};

/// Read-only copy of the complete internal state.
struct DeviceSnapshot {
  std::map<std::string, Bytes> partitions;
  std::map<std::string, Digest> digests;
  Bytes memory;
  BootloaderState bootloader;
  bool live_os_resident = false;
  bool signature_check_active = true;
  std::vector<AccountRecord> accounts;
};

class Device {
 public:
  static Device build(const FixtureManifest& manifest, std::uint64_t seed,
                      std::string digest_algorithm = std::string(kDefaultDigestAlgorithm));

  // Storage ----------------------------------------------------------------
  bool has_partition(std::string_view name) const;
  std::vector<std::string> partition_names() const;
  const Bytes& partition(std::string_view name) const;

  /// Throws Error(OutOfBounds) or Error(UnknownPartition).
  Bytes read_region(const Region& region) const;
  /// Writes `bytes` at `region` (lengths must match). Returns the appended
  /// ledger entry, or nullopt when the content did not change.
  std::optional<ChangeRecord> write_region(const Region& region, ByteView bytes,
                                           std::string_view cause);

  Digest digest(std::string_view partition) const;
  std::map<std::string, Digest> digest_all() const;

  /// Resolves a device-side reference to a concrete region.
  Region resolve(const RegionRef& ref) const;
  const std::map<std::string, Region>& named_regions() const { return named_regions_; }

  bool is_evidential(const Region& region) const;
  const std::vector<Region>& evidential_map() const { return evidential_; }

  // Ledger -----------------------------------------------------------------
  const std::vector<ChangeRecord>& ledger() const { return ledger_; }
  std::vector<ChangeRecord> ledger_diff(std::uint64_t since_seq) const;
  std::uint64_t last_seq() const { return ledger_.empty() ? 0 : ledger_.back().seq; }

  // Boot and memory --------------------------------------------------------
  const BootloaderState& bootloader() const { return bootloader_; }
  void set_allow_unsigned_boot(bool allow) { bootloader_.allow_unsigned_boot = allow; }
  /// Single-byte bootloader configuration parameter, e.g. "live_boot".
  char config_param(std::string_view name) const;

  const Bytes& memory() const { return memory_; }
  void load_live_os(Bytes image);
  bool live_os_resident() const { return live_os_resident_; }

  /// Clears memory and the volatile unsigned-boot flag; flash persists.
  void reboot();

  // OS services ------------------------------------------------------------
  bool signature_check_active() const;
  /// Raw store access for callers that have already passed the signature
  /// gate (see extract_accounts) or hold a Corrupt snapshot.
  const std::vector<AccountRecord>& accounts_store() const { return accounts_; }

  bool has_channel(std::string_view name) const;
  const std::vector<Bytes>& channel(std::string_view name) const;
  std::vector<std::string> channel_names() const;

  // Misc -------------------------------------------------------------------
  std::uint64_t tick() const { return clock_; }
  std::uint64_t advance_clock() { return ++clock_; }
  const std::string& digest_algorithm() const { return digest_algorithm_; }

  DeviceSnapshot snapshot() const;

  /// "FSKD1" container: magic, u32 section count, then sections of
  /// (u32 name length, name, u64 data length, data), sorted by name.
  Bytes serialize() const;
  static Device deserialize(ByteView data);

  bool operator==(const Device& other) const { return serialize() == other.serialize(); }

 private:
  Device() = default;

  std::map<std::string, Bytes> partitions_;
  std::map<std::string, Region> named_regions_;
  std::vector<Region> evidential_;
  BootloaderState bootloader_;
  Bytes memory_;
  bool live_os_resident_ = false;
  std::vector<AccountRecord> accounts_;
  std::map<std::string, std::vector<Bytes>> channels_;
  std::vector<ChangeRecord> ledger_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t clock_ = 0;
  std::string digest_algorithm_{kDefaultDigestAlgorithm};
};

}  // namespace forenskit
