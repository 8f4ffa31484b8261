#include "forenskit/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "forenskit/cipher.hpp"
#include "forenskit/layout.hpp"

namespace forenskit {

std::string_view to_string(Verdict v) { return v == Verdict::Allow ? "allow" : "reject"; }

std::string_view to_string(InvocationStatus s) {
  switch (s) {
    case InvocationStatus::Completed: return "completed";
    case InvocationStatus::Rejected: return "rejected";
    case InvocationStatus::Failed: return "failed";
  }
  return "?";
}

FaultConfig FaultConfig::from_env() {
  FaultConfig f;
  if (const char* seed = std::getenv("FORENSKIT_FAULT_SEED")) {
    char* end = nullptr;
    f.seed = std::strtoull(seed, &end, 10);
    if (end == seed || *end != '\0')
      throw Error(ErrorCode::InvalidArgument, "FORENSKIT_FAULT_SEED must be an integer");
  }
  if (const char* rate = std::getenv("FORENSKIT_FAULT_RATE")) {
    char* end = nullptr;
    f.rate = std::strtod(rate, &end);
    if (end == rate || *end != '\0' || f.rate < 0.0 || f.rate > 1.0)
      throw Error(ErrorCode::InvalidArgument, "FORENSKIT_FAULT_RATE must be in [0, 1]");
  }
  return f;
}

namespace {

bool is_mutating(CapabilityKind k) { return canonical_constraint_table().lookup(k).mutating; }

Digest digest_of_messages(const std::vector<Bytes>& messages) {
  Hasher h;
  for (const auto& m : messages) {
    h.update(std::to_string(m.size()) + ":");
    h.update(m);
  }
  return h.finish();
}

Bytes frame_messages(const std::vector<Bytes>& messages) {
  Bytes out;
  for (const auto& m : messages) {
    std::string head = std::to_string(m.size()) + "\n";
    out.insert(out.end(), head.begin(), head.end());
    out.insert(out.end(), m.begin(), m.end());
    out.push_back('\n');
  }
  return out;
}

Digest artifacts_digest(const std::vector<Artifact>& artifacts) {
  Hasher h;
  for (const auto& a : artifacts) h.update(extraction::to_json(a).dump() + "\n");
  return h.finish();
}

std::set<std::string> partitions_of(const std::vector<Region>& regions) {
  std::set<std::string> out;
  for (const auto& r : regions) out.insert(r.store);
  return out;
}

enum class Scope { Private, External, Databases, App };

Scope examination_scope(const CapabilityInvocation& inv, const InvokeContext& ctx) {
  std::string scope = inv.option("scope");
  if (scope == "private") return Scope::Private;
  if (scope == "external") return Scope::External;
  if (scope == "databases") return Scope::Databases;
  if (scope == "app") return Scope::App;
  if (!scope.empty()) throw Error(ErrorCode::InvalidArgument, "unknown examination scope " + scope);
  if (ctx.stage) switch (*ctx.stage) {
      case StageKind::ExaminePrivateStorage: return Scope::Private;
      case StageKind::ExamineExternalStorage: return Scope::External;
      case StageKind::ExamineDatabases: return Scope::Databases;
      case StageKind::AnalyzeApp: return Scope::App;
      default: break;
    }
  throw Error(ErrorCode::InvalidArgument,
              "forensic examination needs an examination stage or a scope option");
}

}  // namespace

std::vector<Region> predict_effects(const CapabilityInvocation& inv, const Device& device,
                                    const DescriptorRegistry& registry) {
  std::vector<Region> out;
  switch (inv.kind) {
    case CapabilityKind::Delete:
    case CapabilityKind::Modify:
      if (inv.target_data && inv.target_data->on_device()) out.push_back(device.resolve(*inv.target_data));
      break;
    case CapabilityKind::Inject:
      if (inv.entry_point == "framework")
        out.push_back(device.resolve(RegionRef::parse("@framework.hook")));
      else if (inv.entry_point != "memory")
        throw Error(ErrorCode::UnknownTarget, "unknown entry point " + inv.entry_point.value_or(""));
      break;
    case CapabilityKind::Exploit: {
      const ExploitDescriptor* d = registry.find(inv.entry_point.value_or(""));
      if (!d) throw Error(ErrorCode::UnknownDescriptor, "unknown exploit " + inv.entry_point.value_or(""));
      for (const auto& w : d->claimed) out.push_back(device.resolve(RegionRef::parse(w.region)));
      break;
    }
    default:
      break;
  }
  return out;
}

GateDecision gate(const CapabilityInvocation& inv, SoundnessLevel level, const Device& device,
                  const DescriptorRegistry& registry) {
  GateDecision d;
  CriterionSet raw;
  const bool mutating = is_mutating(inv.kind);

  std::vector<Region> predicted;
  try {
    predicted = predict_effects(inv, device, registry);
  } catch (const Error& e) {
    d.reasons.push_back(std::string("effects not predictable: ") + e.what());
  }

  std::vector<Region> declared;
  for (const auto& eff : inv.declared_effects) {
    try {
      declared.push_back(device.resolve(eff.region));
    } catch (const Error& e) {
      raw.insert(Criterion::Errors);
      d.reasons.push_back("declared effect " + eff.region.text() + " does not resolve");
    }
  }
  for (const Region& p : predicted) {
    if (p.length == 0) continue;
    bool covered = std::any_of(declared.begin(), declared.end(),
                               [&](const Region& r) { return r.covers(p); });
    if (!covered) {
      raw.insert(Criterion::Errors);
      d.reasons.push_back("undeclared effect on " + p.to_string());
    }
    if (mutating && device.is_evidential(p)) {
      raw.insert(Criterion::Errors);
      d.reasons.push_back("mutation of evidential data at " + p.to_string());
      if (inv.kind == CapabilityKind::Delete) {
        raw.insert(Criterion::Meaning);
        d.reasons.push_back("deletion of evidential data");
      }
    }
  }

  if (inv.message && inv.message->opaque) {
    raw.insert(Criterion::TransparencyTrustworthiness);
    d.reasons.push_back("opaque payload");
  }
  if (inv.kind == CapabilityKind::Exploit) {
    const ExploitDescriptor* desc = registry.find(inv.entry_point.value_or(""));
    if (desc && desc->opaque) {
      raw.insert(Criterion::TransparencyTrustworthiness);
      d.reasons.push_back("opaque exploit " + desc->name);
    }
  }

  d.violated = raw & canonical_constraint_table().lookup(inv.kind).strict_criteria;
  d.verdict = (level == SoundnessLevel::Strict && !d.violated.empty()) ? Verdict::Reject
                                                                       : Verdict::Allow;
  return d;
}

Engine::Engine(Device device, EngineConfig config, const DescriptorRegistry& registry)
    : device_(std::move(device)),
      config_(std::move(config)),
      registry_(registry),
      workstation_(device_.digest_algorithm()),
      fault_rng_(config_.fault.seed) {}

Bytes Engine::transfer(const Bytes& data, bool& injected) {
  Bytes copy = data;
  injected = false;
  if (!config_.fault.enabled()) return copy;
  const double u = static_cast<double>(fault_rng_() >> 11) * 0x1.0p-53;
  if (u < config_.fault.rate && !copy.empty()) {
    const std::size_t pos = fault_rng_() % copy.size();
    copy[pos] ^= static_cast<std::uint8_t>(1 + fault_rng_() % 255);
    injected = true;
    ++faults_injected_;
  }
  return copy;
}

InvocationResult Engine::invoke(const CapabilityInvocation& inv, const InvokeContext& ctx) {
  InvocationResult result;
  AuditRecord& rec = result.record;
  rec.seq = log_.size() + 1;
  rec.stage = ctx.stage;
  rec.invocation = inv;
  rec.params_digest = params_digest(inv);
  rec.practitioner = config_.practitioner;
  rec.derived = ctx.derived;
  for (const auto& e : inv.declared_effects) rec.declared_regions.push_back(e.region.text());
  rec.opaque = inv.message && inv.message->opaque;
  if (inv.kind == CapabilityKind::Exploit) {
    const ExploitDescriptor* d = registry_.find(inv.entry_point.value_or(""));
    rec.opaque = rec.opaque || (d && d->opaque);
  }
  if (inv.kind == CapabilityKind::ForensicExamination &&
      config_.practitioner.experience == Experience::Novice)
    rec.notes.push_back("examination performed by a novice practitioner");

  auto finish = [&]() -> InvocationResult {
    log_.push_back(rec);
    return std::move(result);
  };

  if (auto problems = check_well_formed(inv); !problems.empty()) {
    rec.tick = device_.tick();
    rec.status = InvocationStatus::Failed;
    rec.error = ErrorCode::InvalidArgument;
    for (const auto& p : problems) rec.error_message += (rec.error_message.empty() ? "" : "; ") + p;
    return finish();
  }

  rec.decision = gate(inv, config_.level, device_, registry_);
  if (rec.decision.verdict == Verdict::Reject) {
    rec.tick = device_.tick();
    rec.status = InvocationStatus::Rejected;
    return finish();
  }

  const bool mutating = is_mutating(inv.kind);
  const bool transactional = mutating && config_.level == SoundnessLevel::Strict;
  std::optional<Device> scratch;
  if (transactional) scratch = device_;
  Device& dev = transactional ? *scratch : device_;

  rec.tick = dev.advance_clock();
  const std::uint64_t since = dev.last_seq();
  const auto pre = mutating ? dev.digest_all() : std::map<std::string, Digest>{};

  try {
    execute(dev, inv, ctx, result);
  } catch (const Error& e) {
    rec.status = InvocationStatus::Failed;
    rec.error = e.code();
    rec.error_message = e.what();
  }

  if (!mutating) {
    // Non-mutating capabilities must leave the ledger alone.
    if (dev.last_seq() != since) throw std::logic_error("non-mutating capability wrote to flash");
    return finish();
  }

  const auto diff = dev.ledger_diff(since);
  std::set<Region> actual;
  for (const auto& c : diff) actual.insert(c.region);
  std::set<Region> declared;
  for (const auto& e : inv.declared_effects) {
    try {
      Region r = dev.resolve(e.region);
      if (r.length > 0) declared.insert(r);
    } catch (const Error&) {
    }
  }
  const bool mismatch = rec.status == InvocationStatus::Completed && actual != declared;

  if (transactional && (mismatch || rec.status == InvocationStatus::Failed)) {
    // Roll back: the scratch device is discarded.
    if (mismatch) {
      rec.status = InvocationStatus::Rejected;
      rec.rolled_back = true;
      rec.error = ErrorCode::DeclaredEffectsMismatch;
      rec.decision.verdict = Verdict::Reject;
      rec.decision.violated.insert(Criterion::Errors);
      std::string observed;
      for (const auto& r : actual) observed += (observed.empty() ? "" : ",") + r.to_string();
      rec.decision.reasons.push_back("actual effects {" + observed +
                                     "} differ from declared effects; rolled back");
      rec.error_message = "declared and actual effects differ";
      result.snapshot.reset();
    }
    rec.tick = device_.tick();
    return finish();
  }

  const auto post = dev.digest_all();
  std::set<std::string> touched;
  for (const auto& r : declared) touched.insert(r.store);
  for (const auto& r : actual) touched.insert(r.store);
  try {
    for (const auto& p : partitions_of(predict_effects(inv, dev, registry_))) touched.insert(p);
  } catch (const Error&) {
  }
  for (const auto& p : touched) {
    if (pre.count(p)) rec.pre_digests[p] = pre.at(p);
    if (post.count(p)) rec.post_digests[p] = post.at(p);
  }
  for (const auto& c : diff) {
    rec.change_seqs.push_back(c.seq);
    rec.actual_regions.push_back(c.region);
  }
  if (mismatch) {
    rec.decision.violated.insert(Criterion::Errors);
    rec.decision.reasons.push_back("actual effects differ from declared effects");
  }
  if (transactional) device_ = std::move(*scratch);
  return finish();
}

void Engine::execute(Device& dev, const CapabilityInvocation& inv, const InvokeContext& ctx,
                     InvocationResult& result) {
  AuditRecord& rec = result.record;
  const std::string cause = "inv-" + std::to_string(rec.seq);
  const std::string& algo = dev.digest_algorithm();

  switch (inv.kind) {
    case CapabilityKind::Corrupt: {
      result.snapshot = dev.snapshot();
      rec.output_digest = compute_digest(dev.serialize(), algo);
      last_corrupt_ = rec.seq;
      rec.notes.push_back("read-only snapshot of the complete internal state");
      return;
    }

    case CapabilityKind::Delete: {
      if (!inv.target_data->on_device())
        throw Error(ErrorCode::InvalidArgument, "workstation items are write-once");
      Region r = dev.resolve(*inv.target_data);
      rec.pre_digests[r.store] = dev.digest(r.store);
      dev.write_region(r, Bytes(r.length, 0), cause);
      return;
    }

    case CapabilityKind::EncryptDecrypt: {
      if (inv.target_data->on_device())
        throw Error(ErrorCode::InvalidArgument, "encrypt/decrypt operates on collected data only");
      const WorkstationItem& item = workstation_.resolve(*inv.target_data);
      Bytes input = item.data;
      const std::string path = inv.option("path");
      if (!path.empty()) {
        auto f = layout::find_file(item.data, path);
        if (!f) throw Error(ErrorCode::UnknownTarget, "no file " + path + " in " + item.id);
        ByteView body = ByteView(item.data).subspan(f->offset, f->length);
        if (auto enc = layout::parse_encrypted(body))
          body = body.subspan(enc->ciphertext_offset, enc->ciphertext_length);
        input.assign(body.begin(), body.end());
      }
      const std::string direction = inv.option("direction", "decrypt");
      CipherDirection dir;
      if (direction == "decrypt") dir = CipherDirection::Decrypt;
      else if (direction == "encrypt") dir = CipherDirection::Encrypt;
      else throw Error(ErrorCode::InvalidArgument, "direction must be encrypt or decrypt");
      result.output = encrypt_decrypt(input, *inv.key, dir);
      rec.source_digest = compute_digest(input, algo);
      rec.output_digest = compute_digest(result.output, algo);
      rec.output_item = workstation_.admit(ItemKind::Derived, inv.option("name", direction + "ed"),
                                           result.output, *rec.output_digest, rec.seq);
      return;
    }

    case CapabilityKind::Exploit: {
      const ExploitDescriptor* d = registry_.find(*inv.entry_point);
      if (!d) throw Error(ErrorCode::UnknownDescriptor, "unknown exploit " + *inv.entry_point);
      rec.notes.push_back(d->summary);
      if (d->grants_unsigned_boot) dev.set_allow_unsigned_boot(true);
      for (const auto& w : d->actual) {
        Region r = dev.resolve(RegionRef::parse(w.region));
        if (w.value.size() != r.length)
          throw Error(ErrorCode::InvalidArgument, "descriptor write size mismatch");
        dev.write_region(r, w.value, cause);
      }
      return;
    }

    case CapabilityKind::ForensicCopy: {
      const RegionRef& ref = *inv.target_data;
      if (ref.form() != RegionRef::Form::Partition)
        throw Error(ErrorCode::InvalidArgument, "forensic copy takes a whole partition");
      const std::string& part = ref.name();
      const Bytes& source = dev.partition(part);
      if (part != "sdcard" && !dev.live_os_resident())
        throw Error(ErrorCode::LiveOsRequired,
                    "physical copy of " + part + " requires a resident live OS");
      rec.source_digest = compute_digest(source, algo);
      rec.pre_digests[part] = *rec.source_digest;
      bool injected = false;
      Bytes image = transfer(source, injected);
      rec.fault_injected = injected;
      rec.output_digest = compute_digest(image, algo);
      rec.post_digests[part] = dev.digest(part);
      if (*rec.output_digest != *rec.source_digest)
        throw Error(ErrorCode::DigestMismatch, "image digest differs from source digest of " + part);
      rec.output_item = workstation_.admit(ItemKind::Image, part, std::move(image),
                                           *rec.source_digest, rec.seq);
      return;
    }

    case CapabilityKind::ForensicExamination: {
      auto method = extraction::parse_method(*inv.method);
      if (!method) throw Error(ErrorCode::UnknownMethod, "unknown method " + *inv.method);
      const Scope scope = examination_scope(inv, ctx);
      const std::string app = inv.option("app", "*");
      const RegionRef& target = *inv.target_data;
      if (target.on_device())
        throw Error(ErrorCode::InvalidArgument, "examination runs on collected images only");

      const WorkstationItem* item = nullptr;
      try {
        item = &workstation_.resolve(target);
      } catch (const Error&) {
        const bool missing_sdcard = target.form() == RegionRef::Form::Image &&
                                    target.name() == "sdcard" && !dev.has_partition("sdcard");
        if (scope != Scope::External || !missing_sdcard) throw;
      }
      if (item) rec.pre_digests["item:" + item->id] = compute_digest(item->data, algo);

      auto& ex = result.examination;
      switch (scope) {
        case Scope::Private: ex = extraction::examine_private_storage(*item, app); break;
        case Scope::External: ex = extraction::examine_external_storage(item, app); break;
        case Scope::Databases: ex = extraction::examine_databases(*item, app); break;
        case Scope::App: {
          auto mode = extraction::parse_mode(inv.option("mode", "static"));
          if (!mode) throw Error(ErrorCode::InvalidArgument, "mode must be static or dynamic");
          ex = extraction::analyze_app(*item, app, *mode);
          break;
        }
      }
      if (ex.no_external_storage) rec.notes.push_back("no-external-storage");
      ex.artifacts = extraction::apply_method(std::move(ex.artifacts), *method, inv.option("pattern"));
      if (*method == extraction::Method::KeywordSearch || *method == extraction::Method::RegexScan) {
        std::set<std::string> kept;
        for (const auto& a : ex.artifacts)
          if (a.kind == ArtifactKind::FileMetadataRecord) kept.insert(a.label);
        std::erase_if(ex.metadata, [&](const FileMetadataRecord& m) {
          return kept.count(m.database + "/" + m.table + "/" + m.record_id) == 0;
        });
      }
      for (const auto& f : ex.findings) rec.notes.push_back(f.app_id + ": " + f.message);
      rec.output_digest = artifacts_digest(ex.artifacts);
      if (item) rec.post_digests["item:" + item->id] = compute_digest(item->data, algo);
      return;
    }

    case CapabilityKind::Inject: {
      const Bytes& payload = inv.message->data;
      if (*inv.entry_point == "memory") {
        if (!dev.bootloader().allow_unsigned_boot)
          throw Error(ErrorCode::UnsignedBootNotAllowed, "bootloader refuses unsigned boot images");
        if (dev.config_param("live_boot") != '1')
          throw Error(ErrorCode::UnsignedBootNotAllowed,
                      "live boot disabled in bootloader configuration");
        dev.load_live_os(payload);
        rec.output_digest = compute_digest(payload, algo);
        rec.notes.push_back("live OS resident in volatile memory");
        return;
      }
      if (*inv.entry_point == "framework") {
        Region hook = dev.resolve(RegionRef::parse("@framework.hook"));
        if (payload.size() > hook.length)
          throw Error(ErrorCode::InvalidArgument, "framework payload exceeds hook slot");
        Bytes slot(hook.length, 0);
        std::copy(payload.begin(), payload.end(), slot.begin());
        dev.write_region(hook, slot, cause);
        return;
      }
      throw Error(ErrorCode::UnknownTarget, "unknown entry point " + *inv.entry_point);
    }

    case CapabilityKind::Listen: {
      const std::string& name = inv.target_data->name();
      result.messages = dev.channel(name);
      rec.source_digest = digest_of_messages(dev.channel(name));
      rec.output_digest = digest_of_messages(result.messages);
      Bytes framed = frame_messages(result.messages);
      if (!framed.empty())
        rec.output_item = workstation_.admit(ItemKind::Capture, "channel-" + name, framed,
                                             compute_digest(framed, algo), rec.seq);
      return;
    }

    case CapabilityKind::Modify: {
      if (!inv.target_data->on_device())
        throw Error(ErrorCode::InvalidArgument, "workstation items are write-once");
      Region target = dev.resolve(*inv.target_data);
      Region write{target.store, target.offset, inv.message->data.size()};
      dev.read_region(write);  // bounds check
      dev.write_region(write, inv.message->data, cause);
      return;
    }

    case CapabilityKind::Transmit: {
      Bytes blob;
      std::string label = inv.option("name", "message");
      const std::string source = inv.option("source");
      if (source == "accounts") {
        result.examination.artifacts = extraction::extract_accounts(dev, log_);
        blob = extraction::accounts_blob(dev.accounts_store());
        label = "accounts";
        if (last_corrupt_) rec.corrupt_ref = last_corrupt_;
      } else if (!source.empty()) {
        throw Error(ErrorCode::InvalidArgument, "unknown transmit source " + source);
      } else {
        blob = inv.message->data;
      }
      rec.source_digest = compute_digest(blob, algo);
      if (blob.empty()) {
        rec.output_digest = rec.source_digest;
        rec.notes.push_back("empty message; nothing admitted");
        return;
      }
      bool injected = false;
      Bytes received = transfer(blob, injected);
      rec.fault_injected = injected;
      rec.output_digest = compute_digest(received, algo);
      if (*rec.output_digest != *rec.source_digest) {
        result.examination.artifacts.clear();
        throw Error(ErrorCode::DigestMismatch, "transmitted digest differs from source digest");
      }
      rec.output_item = workstation_.admit(ItemKind::Blob, label, std::move(received),
                                           *rec.source_digest, rec.seq);
      return;
    }
  }
}

}  // namespace forenskit
