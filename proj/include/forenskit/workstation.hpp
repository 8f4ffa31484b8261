#pragma once

// Forensic workstation: content-addressed, write-once store for collected
// images, transmitted blobs, channel captures and derived data.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "forenskit/bytes.hpp"
#include "forenskit/digest.hpp"
#include "forenskit/region.hpp"

namespace forenskit {

enum class ItemKind : std::uint8_t { Image, Blob, Capture, Derived };

std::string_view to_string(ItemKind kind);

struct WorkstationItem {
  std::string id;  // "<label>-<first 16 hex digits of digest>"
  ItemKind kind = ItemKind::Image;
  std::string label;  // partition name for images
  Bytes data;
  Digest digest;
  std::uint64_t source_seq = 0;
};

class Workstation {
 public:
  explicit Workstation(std::string digest_algorithm = std::string(kDefaultDigestAlgorithm));

  /// Admits `data` after checking it hashes to `expected`. Throws
  /// Error(DigestMismatch) and stores nothing otherwise. Re-admitting
  /// identical content under the same label returns the existing id.
  std::string admit(ItemKind kind, std::string label, Bytes data, const Digest& expected,
                    std::uint64_t source_seq);

  const WorkstationItem* find(std::string_view id) const;
  /// Most recently admitted item of `kind` with `label`.
  const WorkstationItem* latest(ItemKind kind, std::string_view label) const;
  /// image:<partition>, image:external, workstation:<id or label>.
  /// Throws Error(UnknownTarget).
  const WorkstationItem& resolve(const RegionRef& ref) const;

  std::vector<const WorkstationItem*> items() const;
  std::size_t size() const { return items_.size(); }
  const std::string& digest_algorithm() const { return algorithm_; }

 private:
  std::string algorithm_;
  std::map<std::string, WorkstationItem> items_;
  std::vector<std::string> order_;
};

}  // namespace forenskit
