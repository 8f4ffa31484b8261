#include "forenskit/serialize.hpp"

#include <fstream>
#include <sstream>

#include "forenskit/extraction.hpp"

namespace forenskit {

using nlohmann::json;

namespace {

template <typename T>
T parse_or_throw(std::optional<T> v, std::string_view what, const std::string& text) {
  if (!v) throw Error(ErrorCode::Parse, "unknown " + std::string(what) + " '" + text + "'");
  return *v;
}

json digests_json(const std::map<std::string, Digest>& m) {
  json j = json::object();
  for (const auto& [k, d] : m) j[k] = d.hex();
  return j;
}

std::map<std::string, Digest> digests_from(const json& j) {
  std::map<std::string, Digest> m;
  for (const auto& [k, v] : j.items()) m[k] = Digest::from_hex(v.get<std::string>());
  return m;
}

json region_json(const Region& r) { return {r.store, r.offset, r.length}; }

Region region_from(const json& j) {
  return {j.at(0).get<std::string>(), j.at(1).get<std::uint64_t>(), j.at(2).get<std::uint64_t>()};
}

json optional_digest(const std::optional<Digest>& d) { return d ? json(d->hex()) : json(nullptr); }

std::optional<Digest> optional_digest_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return Digest::from_hex(j.get<std::string>());
}

json practitioner_json(const PractitionerProfile& p) {
  return {{"id", p.id}, {"experience", to_string(p.experience)}};
}

PractitionerProfile practitioner_from(const json& j) {
  PractitionerProfile p;
  p.id = j.at("id").get<std::string>();
  const std::string exp = j.at("experience").get<std::string>();
  p.experience = parse_or_throw(parse_experience(exp), "experience", exp);
  return p;
}

}  // namespace

std::optional<ErrorCode> parse_error_code(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Io); ++i)
    if (to_string(static_cast<ErrorCode>(i)) == name) return static_cast<ErrorCode>(i);
  return std::nullopt;
}

json invocation_to_json(const CapabilityInvocation& inv) {
  json params = json::array();
  for (const auto& [k, v] : encode_params(inv)) params.push_back({k, v});
  json j{{"kind", to_string(inv.kind)}, {"params", params}};
  if (inv.target_device != "device") j["target_device"] = inv.target_device;
  return j;
}

CapabilityInvocation invocation_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  Params params;
  for (const auto& p : j.at("params"))
    params.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  CapabilityInvocation inv = decode_params(parse_or_throw(parse_capability(kind), "capability", kind), params);
  inv.target_device = j.value("target_device", "device");
  return inv;
}

json to_json(const AuditRecord& r) {
  json violated = json::array();
  for (Criterion c : kAllCriteria)
    if (r.decision.violated.contains(c)) violated.push_back(to_string(c));
  json actual = json::array();
  for (const auto& reg : r.actual_regions) actual.push_back(region_json(reg));
  json j{{"seq", r.seq},
         {"tick", r.tick},
         {"stage", r.stage ? json(to_string(*r.stage)) : json(nullptr)},
         {"invocation", invocation_to_json(r.invocation)},
         {"params_digest", r.params_digest.hex()},
         {"decision", {{"verdict", to_string(r.decision.verdict)},
                       {"violated", violated},
                       {"reasons", r.decision.reasons}}},
         {"status", to_string(r.status)},
         {"error", r.error ? json(to_string(*r.error)) : json(nullptr)},
         {"error_message", r.error_message},
         {"change_seqs", r.change_seqs},
         {"actual_regions", actual},
         {"declared_regions", r.declared_regions},
         {"pre_digests", digests_json(r.pre_digests)},
         {"post_digests", digests_json(r.post_digests)},
         {"source_digest", optional_digest(r.source_digest)},
         {"output_digest", optional_digest(r.output_digest)},
         {"output_item", r.output_item},
         {"practitioner", practitioner_json(r.practitioner)},
         {"opaque", r.opaque},
         {"fault_injected", r.fault_injected},
         {"rolled_back", r.rolled_back},
         {"derived", r.derived},
         {"corrupt_ref", r.corrupt_ref ? json(*r.corrupt_ref) : json(nullptr)},
         {"notes", r.notes}};
  return j;
}

AuditRecord audit_record_from_json(const json& j) {
  AuditRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.tick = j.at("tick").get<std::uint64_t>();
  if (!j.at("stage").is_null()) {
    const std::string s = j.at("stage").get<std::string>();
    r.stage = parse_or_throw(parse_stage(s), "stage", s);
  }
  r.invocation = invocation_from_json(j.at("invocation"));
  r.params_digest = Digest::from_hex(j.at("params_digest").get<std::string>());
  const json& d = j.at("decision");
  const std::string verdict = d.at("verdict").get<std::string>();
  if (verdict != "allow" && verdict != "reject") throw Error(ErrorCode::Parse, "unknown verdict " + verdict);
  r.decision.verdict = verdict == "allow" ? Verdict::Allow : Verdict::Reject;
  for (const auto& c : d.at("violated")) {
    const std::string name = c.get<std::string>();
    r.decision.violated.insert(parse_or_throw(parse_criterion(name), "criterion", name));
  }
  r.decision.reasons = d.at("reasons").get<std::vector<std::string>>();
  const std::string status = j.at("status").get<std::string>();
  if (status == to_string(InvocationStatus::Completed)) r.status = InvocationStatus::Completed;
  else if (status == to_string(InvocationStatus::Rejected)) r.status = InvocationStatus::Rejected;
  else if (status == to_string(InvocationStatus::Failed)) r.status = InvocationStatus::Failed;
  else throw Error(ErrorCode::Parse, "unknown status " + status);
  if (!j.at("error").is_null()) {
    const std::string e = j.at("error").get<std::string>();
    r.error = parse_or_throw(parse_error_code(e), "error code", e);
  }
  r.error_message = j.at("error_message").get<std::string>();
  r.change_seqs = j.at("change_seqs").get<std::vector<std::uint64_t>>();
  for (const auto& reg : j.at("actual_regions")) r.actual_regions.push_back(region_from(reg));
  r.declared_regions = j.at("declared_regions").get<std::vector<std::string>>();
  r.pre_digests = digests_from(j.at("pre_digests"));
  r.post_digests = digests_from(j.at("post_digests"));
  r.source_digest = optional_digest_from(j.at("source_digest"));
  r.output_digest = optional_digest_from(j.at("output_digest"));
  r.output_item = j.at("output_item").get<std::string>();
  r.practitioner = practitioner_from(j.at("practitioner"));
  r.opaque = j.at("opaque").get<bool>();
  r.fault_injected = j.at("fault_injected").get<bool>();
  r.rolled_back = j.at("rolled_back").get<bool>();
  r.derived = j.at("derived").get<bool>();
  if (!j.at("corrupt_ref").is_null()) r.corrupt_ref = j.at("corrupt_ref").get<std::uint64_t>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

json to_json(const ExecutionTrace& t) {
  json records = json::array();
  for (const auto& r : t.records) records.push_back(to_json(r));
  json artifacts = json::array();
  for (const auto& a : t.artifacts) artifacts.push_back(extraction::to_json(a));
  json metadata = json::array();
  for (const auto& m : t.metadata) metadata.push_back(extraction::to_json(m));
  json stages = json::array();
  for (const auto& s : t.stages)
    stages.push_back({{"stage", to_string(s.stage)},
                      {"seqs", s.seqs},
                      {"reached", s.reached},
                      {"completed", s.completed}});
  json ledger = json::array();
  for (const auto& c : t.ledger)
    ledger.push_back({{"seq", c.seq},
                      {"tick", c.tick},
                      {"region", region_json(c.region)},
                      {"before", c.before_digest.hex()},
                      {"after", c.after_digest.hex()},
                      {"cause", c.cause}});
  json ws = json::array();
  for (const auto& w : t.workstation)
    ws.push_back({{"id", w.id},
                  {"kind", to_string(w.kind)},
                  {"label", w.label},
                  {"digest", w.digest.hex()},
                  {"size", w.size},
                  {"source_seq", w.source_seq}});
  json named = json::object();
  for (const auto& [k, r] : t.named_regions) named[k] = region_json(r);
  return {{"format", "forenskit-trace-1"},
          {"plan", render_plan(t.plan)},
          {"seed", t.seed},
          {"digest_algorithm", t.digest_algorithm},
          {"records", records},
          {"artifacts", artifacts},
          {"metadata", metadata},
          {"stages", stages},
          {"ledger", ledger},
          {"initial_digests", digests_json(t.initial_digests)},
          {"final_digests", digests_json(t.final_digests)},
          {"partitions", t.partitions},
          {"named_regions", named},
          {"workstation", ws},
          {"halted", t.halted},
          {"halted_at", t.halted_at ? json(*t.halted_at) : json(nullptr)}};
}

ExecutionTrace trace_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "forenskit-trace-1")
      throw Error(ErrorCode::Parse, "unsupported trace format");
    ExecutionTrace t;
    t.plan = parse_plan(j.at("plan").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    t.digest_algorithm = j.at("digest_algorithm").get<std::string>();
    for (const auto& r : j.at("records")) t.records.push_back(audit_record_from_json(r));
    for (const auto& a : j.at("artifacts")) t.artifacts.push_back(extraction::artifact_from_json(a));
    for (const auto& m : j.at("metadata")) t.metadata.push_back(extraction::metadata_from_json(m));
    for (const auto& s : j.at("stages")) {
      const std::string name = s.at("stage").get<std::string>();
      t.stages.push_back({parse_or_throw(parse_stage(name), "stage", name),
                          s.at("seqs").get<std::vector<std::uint64_t>>(), s.at("reached").get<bool>(),
                          s.at("completed").get<bool>()});
    }
    for (const auto& c : j.at("ledger"))
      t.ledger.push_back({c.at("seq").get<std::uint64_t>(), c.at("tick").get<std::uint64_t>(),
                          region_from(c.at("region")),
                          Digest::from_hex(c.at("before").get<std::string>()),
                          Digest::from_hex(c.at("after").get<std::string>()),
                          c.at("cause").get<std::string>()});
    t.initial_digests = digests_from(j.at("initial_digests"));
    t.final_digests = digests_from(j.at("final_digests"));
    t.partitions = j.at("partitions").get<std::vector<std::string>>();
    for (const auto& [k, r] : j.at("named_regions").items()) t.named_regions[k] = region_from(r);
    for (const auto& w : j.at("workstation")) {
      const std::string kind = w.at("kind").get<std::string>();
      ItemKind k;
      if (kind == to_string(ItemKind::Image)) k = ItemKind::Image;
      else if (kind == to_string(ItemKind::Blob)) k = ItemKind::Blob;
      else if (kind == to_string(ItemKind::Capture)) k = ItemKind::Capture;
      else if (kind == to_string(ItemKind::Derived)) k = ItemKind::Derived;
      else throw Error(ErrorCode::Parse, "unknown item kind " + kind);
      t.workstation.push_back({w.at("id").get<std::string>(), k, w.at("label").get<std::string>(),
                               Digest::from_hex(w.at("digest").get<std::string>()),
                               w.at("size").get<std::uint64_t>(), w.at("source_seq").get<std::uint64_t>()});
    }
    t.halted = j.at("halted").get<bool>();
    if (!j.at("halted_at").is_null()) t.halted_at = j.at("halted_at").get<std::uint64_t>();
    return t;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, std::string("malformed trace: ") + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed trace: ") + e.what());
  }
}

void save_trace(const ExecutionTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << to_json(trace).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

ExecutionTrace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed trace: ") + e.what());
  }
  return trace_from_json(j);
}

}  // namespace forenskit
