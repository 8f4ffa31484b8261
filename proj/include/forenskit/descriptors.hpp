#pragma once

// Exploit descriptors: what an exploit claims to do, and what it actually
// does when run on the simulator.

#include <map>
#include <string>
#include <vector>

#include "forenskit/bytes.hpp"

namespace forenskit {

struct ExploitWrite {
  std::string region;  // RegionRef text
  Bytes value;         // exactly the resolved region's length

  bool operator==(const ExploitWrite&) const = default;
};

struct ExploitDescriptor {
  std::string name;
  std::string summary;
  bool opaque = false;
  bool grants_unsigned_boot = false;
  /// Effects as documented by the descriptor author.
  std::vector<ExploitWrite> claimed;
  /// Effects the simulator applies.
  std::vector<ExploitWrite> actual;
  /// Documented effects have been checked against the implementation.
  bool effects_verified = false;
};

class DescriptorRegistry {
 public:
  void add(ExploitDescriptor d) { entries_[d.name] = std::move(d); }
  const ExploitDescriptor* find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, ExploitDescriptor>& entries() const { return entries_; }

 private:
  std::map<std::string, ExploitDescriptor> entries_;
};

/// bootloader-unsigned-boot, opaque-root, recovery-flash, vendor-unlock-tool.
const DescriptorRegistry& bundled_descriptors();

}  // namespace forenskit
