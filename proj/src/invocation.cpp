#include "forenskit/invocation.hpp"

#include "forenskit/digest.hpp"

namespace forenskit {

namespace {

bool mutating(CapabilityKind k) {
  return canonical_constraint_table().lookup(k).mutating;
}

void need(std::vector<std::string>& out, bool present, CapabilityKind k, const char* param) {
  if (!present) out.push_back(std::string(to_string(k)) + " requires " + param);
}

void field(Hasher& h, std::string_view name, std::string_view value) {
  h.update(name).update("=").update(std::to_string(value.size())).update(":").update(value);
  h.update("\n");
}

}  // namespace

std::vector<std::string> check_well_formed(const CapabilityInvocation& inv) {
  std::vector<std::string> out;
  const CapabilityKind k = inv.kind;
  switch (k) {
    case CapabilityKind::Corrupt:
      break;
    case CapabilityKind::Delete:
      need(out, inv.target_data.has_value(), k, "target data");
      break;
    case CapabilityKind::EncryptDecrypt:
      need(out, inv.target_data.has_value(), k, "target data");
      need(out, inv.key.has_value() && !inv.key->empty(), k, "a non-empty key");
      break;
    case CapabilityKind::Exploit:
      need(out, inv.entry_point.has_value(), k, "an entry point");
      break;
    case CapabilityKind::ForensicCopy:
      need(out, inv.target_data.has_value(), k, "a source partition");
      break;
    case CapabilityKind::ForensicExamination:
      need(out, inv.target_data.has_value(), k, "target data");
      need(out, inv.method.has_value(), k, "a method");
      break;
    case CapabilityKind::Inject:
      need(out, inv.entry_point.has_value(), k, "an entry point");
      need(out, inv.message.has_value(), k, "a message");
      break;
    case CapabilityKind::Listen:
      need(out, inv.target_data && inv.target_data->form() == RegionRef::Form::Channel, k,
           "a channel target");
      break;
    case CapabilityKind::Modify:
      need(out, inv.target_data.has_value(), k, "target data");
      need(out, inv.message.has_value(), k, "a message");
      break;
    case CapabilityKind::Transmit:
      need(out, inv.message.has_value() || inv.options.count("source") > 0, k,
           "a message or a source");
      break;
  }
  if (!mutating(k) && !inv.declared_effects.empty())
    out.push_back(std::string(to_string(k)) + " is non-mutating and cannot declare effects");
  return out;
}

Digest params_digest(const CapabilityInvocation& inv) {
  Hasher h;
  field(h, "kind", to_string(inv.kind));
  field(h, "device", inv.target_device);
  if (inv.target_data) field(h, "target", inv.target_data->text());
  if (inv.key) field(h, "key", to_hex(*inv.key));
  if (inv.entry_point) field(h, "entry", *inv.entry_point);
  if (inv.message) {
    field(h, "message", to_hex(inv.message->data));
    field(h, "opaque", inv.message->opaque ? "1" : "0");
  }
  if (inv.method) field(h, "method", *inv.method);
  for (const auto& e : inv.declared_effects)
    field(h, "declare", e.region.text() + (e.after_digest ? "#" + e.after_digest->hex() : ""));
  for (const auto& [k, v] : inv.options) field(h, "option:" + k, v);
  return h.finish();
}

}  // namespace forenskit
