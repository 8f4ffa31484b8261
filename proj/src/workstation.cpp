#include "forenskit/workstation.hpp"

#include "forenskit/error.hpp"

namespace forenskit {

std::string_view to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::Image: return "image";
    case ItemKind::Blob: return "blob";
    case ItemKind::Capture: return "capture";
    case ItemKind::Derived: return "derived";
  }
  return "?";
}

Workstation::Workstation(std::string digest_algorithm) : algorithm_(std::move(digest_algorithm)) {}

std::string Workstation::admit(ItemKind kind, std::string label, Bytes data,
                               const Digest& expected, std::uint64_t source_seq) {
  Digest actual = compute_digest(data, algorithm_);
  if (actual != expected)
    throw Error(ErrorCode::DigestMismatch, "digest mismatch admitting " + label + ": expected " +
                                               expected.hex() + ", got " + actual.hex());
  std::string id = label + "-" + actual.hex().substr(0, 16);
  if (items_.count(id) > 0) return id;
  items_[id] = {id, kind, std::move(label), std::move(data), actual, source_seq};
  order_.push_back(id);
  return id;
}

const WorkstationItem* Workstation::find(std::string_view id) const {
  auto it = items_.find(std::string(id));
  return it == items_.end() ? nullptr : &it->second;
}

const WorkstationItem* Workstation::latest(ItemKind kind, std::string_view label) const {
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    const WorkstationItem& item = items_.at(*it);
    if (item.kind == kind && item.label == label) return &item;
  }
  return nullptr;
}

const WorkstationItem& Workstation::resolve(const RegionRef& ref) const {
  const WorkstationItem* item = nullptr;
  if (ref.form() == RegionRef::Form::Image) {
    if (ref.name() == "external") {
      item = latest(ItemKind::Image, "sdcard");
      if (!item) item = latest(ItemKind::Image, "userdata");
    } else {
      item = latest(ItemKind::Image, ref.name());
    }
  } else if (ref.form() == RegionRef::Form::Workstation) {
    item = find(ref.name());
    for (auto it = order_.rbegin(); !item && it != order_.rend(); ++it)
      if (items_.at(*it).label == ref.name()) item = &items_.at(*it);
  }
  if (!item) throw Error(ErrorCode::UnknownTarget, "no workstation item for " + ref.text());
  return *item;
}

std::vector<const WorkstationItem*> Workstation::items() const {
  std::vector<const WorkstationItem*> out;
  for (const auto& id : order_) out.push_back(&items_.at(id));
  return out;
}

}  // namespace forenskit
