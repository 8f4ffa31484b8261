#include "forenskit/validate.hpp"

#include <map>
#include <regex>
#include <set>

#include "forenskit/extraction.hpp"
#include "forenskit/layout.hpp"

namespace forenskit {

bool ValidationReport::valid() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& f : findings) n += f.severity == Severity::Error;
  return n;
}

namespace {

bool examination_stage(StageKind s) {
  return s == StageKind::ExaminePrivateStorage || s == StageKind::ExamineExternalStorage ||
         s == StageKind::ExamineDatabases || s == StageKind::AnalyzeApp;
}

/// Partition a static reference lands in, when known.
std::optional<std::string> partition_of(const RegionRef& ref) {
  if (ref.form() == RegionRef::Form::Named) {
    if (const auto* spec = layout::find_named_region(ref.name())) return std::string(spec->partition);
    return std::nullopt;
  }
  if (!ref.on_device() || ref.form() == RegionRef::Form::Channel) return std::nullopt;
  return ref.name();
}

Bytes factory_bytes(const layout::NamedRegionSpec& spec) {
  if (spec.factory_value.empty()) return Bytes(spec.length, 0);
  return to_bytes(spec.factory_value);
}

class Checker {
 public:
  Checker(const Plan& plan, const ConstraintTable& table, const StageMap& stages,
          const DescriptorRegistry& registry)
      : plan_(plan), table_(table), stages_(stages), registry_(registry) {
    for (const auto& spec : layout::named_region_specs())
      named_[std::string(spec.name)] = factory_bytes(spec);
  }

  ValidationReport run() {
    check_order();
    for (const PlanStage& stage : plan_.stages) {
      const StageRow& row = stages_.lookup(stage.kind);
      if (plan_.practitioner.experience == Experience::Novice &&
          row.adherence == Adherence::ExperienceDependent)
        add(stage.kind, std::nullopt, Severity::Warning, "experience",
            "stage is experience dependent and the practitioner is a novice");
      for (std::size_t i = 0; i < stage.invocations.size(); ++i)
        check_invocation(stage, i, row);
    }
    return std::move(report_);
  }

 private:
  void add(std::optional<StageKind> stage, std::optional<std::size_t> inv, Severity sev,
           std::string rule, std::string message) {
    report_.findings.push_back({stage, inv, sev, std::move(rule), std::move(message)});
  }

  void check_order() {
    for (std::size_t i = 0; i < plan_.stages.size(); ++i)
      for (std::size_t j = i + 1; j < plan_.stages.size(); ++j) {
        StageKind a = plan_.stages[i].kind;
        StageKind b = plan_.stages[j].kind;
        if (!stage_precedes(a, b))
          add(b, std::nullopt, Severity::Error, "stage-order",
              std::string(to_string(b)) + " must come before " + std::string(to_string(a)));
      }
  }

  void check_invocation(const PlanStage& stage, std::size_t idx, const StageRow& row) {
    const CapabilityInvocation& inv = stage.invocations[idx];
    const bool strict = plan_.level == SoundnessLevel::Strict;
    auto error = [&](const char* rule, const std::string& msg) {
      add(stage.kind, idx, Severity::Error, rule, std::string(to_string(inv.kind)) + ": " + msg);
    };

    if (!row.allowed.contains(inv.kind))
      add(stage.kind, idx, strict ? Severity::Error : Severity::Warning, "stage-capability",
          std::string(to_string(inv.kind)) + " is not used in " + std::string(to_string(stage.kind)));

    for (const auto& p : check_well_formed(inv)) error("invocation-params", p);

    std::set<std::string> declared;
    for (const auto& e : inv.declared_effects)
      if (!declared.insert(e.region.text()).second)
        error("duplicate-effect", "effect on " + e.region.text() + " declared twice");

    const RegionRef* target = inv.target_data ? &*inv.target_data : nullptr;
    switch (inv.kind) {
      case CapabilityKind::ForensicExamination: {
        if (inv.method) {
          auto m = extraction::parse_method(*inv.method);
          if (!m) {
            error("unknown-method", "unknown method '" + *inv.method + "'");
          } else if (*m == extraction::Method::KeywordSearch || *m == extraction::Method::RegexScan) {
            std::string pattern = inv.option("pattern");
            if (pattern.empty()) error("invocation-params", "method needs a pattern");
            if (*m == extraction::Method::RegexScan && !pattern.empty()) {
              try {
                std::regex re(pattern);
              } catch (const std::regex_error&) {
                error("invocation-params", "invalid regex '" + pattern + "'");
              }
            }
          }
        }
        if (target && target->on_device())
          error("invocation-params", "examination runs on collected images, not " + target->text());
        const std::string scope = inv.option("scope");
        if (!scope.empty() && scope != "private" && scope != "external" && scope != "databases" &&
            scope != "app")
          error("invocation-params", "unknown scope '" + scope + "'");
        if (scope.empty() && !examination_stage(stage.kind))
          error("invocation-params", "examination outside an examination stage needs a scope");
        if (inv.options.count("mode") && !extraction::parse_mode(inv.option("mode")))
          error("invocation-params", "mode must be static or dynamic");
        break;
      }
      case CapabilityKind::EncryptDecrypt: {
        if (target && target->on_device())
          error("invocation-params", "encrypt/decrypt operates on collected data only");
        std::string dir = inv.option("direction", "decrypt");
        if (dir != "decrypt" && dir != "encrypt")
          error("invocation-params", "direction must be encrypt or decrypt");
        break;
      }
      case CapabilityKind::ForensicCopy:
        if (target && target->form() != RegionRef::Form::Partition)
          error("invocation-params", "forensic copy takes a whole partition");
        break;
      case CapabilityKind::Delete:
      case CapabilityKind::Modify:
        if (target && !target->on_device())
          error("invocation-params", "workstation items are write-once");
        break;
      case CapabilityKind::Inject:
        if (inv.entry_point && *inv.entry_point != "memory" && *inv.entry_point != "framework")
          error("unknown-entry", "unknown entry point '" + *inv.entry_point + "'");
        if (inv.entry_point == "framework" && inv.message &&
            inv.message->data.size() > layout::kHookSlotSize)
          error("invocation-params", "framework payload exceeds the hook slot");
        break;
      case CapabilityKind::Exploit:
        if (inv.entry_point && !registry_.find(*inv.entry_point))
          error("unknown-descriptor", "unknown exploit '" + *inv.entry_point + "'");
        break;
      case CapabilityKind::Transmit: {
        std::string source = inv.option("source");
        if (!source.empty() && source != "accounts")
          error("invocation-params", "unknown transmit source '" + source + "'");
        break;
      }
      default:
        break;
    }

    if (strict) check_strict(inv, error);
    simulate(inv, error, strict);
  }

  template <typename ErrorFn>
  void check_strict(const CapabilityInvocation& inv, ErrorFn& error) {
    if (inv.message && inv.message->opaque) error("strict-gate", "opaque payload");
    const ExploitDescriptor* desc =
        inv.kind == CapabilityKind::Exploit ? registry_.find(inv.entry_point.value_or("")) : nullptr;
    if (desc && desc->opaque) error("strict-gate", "opaque exploit '" + desc->name + "'");
    if (desc && !desc->effects_verified)
      error("strict-gate", "exploit '" + desc->name + "' has unverified effects");

    if (!table_.lookup(inv.kind).mutating) return;

    std::set<std::string> predicted;
    switch (inv.kind) {
      case CapabilityKind::Delete:
      case CapabilityKind::Modify:
        if (!inv.target_data) return;
        if (inv.target_data->form() != RegionRef::Form::Named ||
            !layout::find_named_region(inv.target_data->name())) {
          error("strict-gate", "strict mutations must target a named configuration region");
          return;
        }
        predicted.insert(inv.target_data->text());
        if (inv.kind == CapabilityKind::Modify && inv.message) {
          const auto* spec = layout::find_named_region(inv.target_data->name());
          if (inv.message->data.size() != spec->length)
            error("strict-gate", "message length " + std::to_string(inv.message->data.size()) +
                                     " differs from " + inv.target_data->text() + " length " +
                                     std::to_string(spec->length));
        }
        break;
      case CapabilityKind::Inject:
        if (inv.entry_point == "framework") predicted.insert("@framework.hook");
        break;
      case CapabilityKind::Exploit:
        if (desc)
          for (const auto& w : desc->claimed) predicted.insert(w.region);
        break;
      default:
        break;
    }

    for (const auto& p : predicted) {
      auto part = partition_of(RegionRef::parse(p));
      if (part && layout::evidential_partition(*part))
        error("strict-gate", inv.kind == CapabilityKind::Delete
                                 ? "deletes evidential data in " + p
                                 : "mutates evidential data in " + p);
    }
    std::set<std::string> declared;
    for (const auto& e : inv.declared_effects) declared.insert(e.region.text());
    if (declared != predicted) {
      std::string want;
      for (const auto& p : predicted) want += (want.empty() ? "" : ",") + p;
      error("strict-gate", "declared effects must equal predicted effects {" + want + "}");
    }
  }

  /// Tracks named-region contents through the plan to find writes that
  /// would not change anything (and so leave a declared effect unrealised).
  template <typename ErrorFn>
  void simulate(const CapabilityInvocation& inv, ErrorFn& error, bool strict) {
    auto write = [&](const std::string& name, const Bytes& value) {
      auto it = named_.find(name);
      if (it == named_.end() || it->second.size() != value.size()) return;
      if (it->second == value && strict)
        error("noop-modify", "write to @" + name + " leaves it unchanged");
      it->second = value;
    };
    switch (inv.kind) {
      case CapabilityKind::Modify:
        if (inv.target_data && inv.message && inv.target_data->form() == RegionRef::Form::Named)
          write(inv.target_data->name(), inv.message->data);
        break;
      case CapabilityKind::Delete:
        if (inv.target_data && inv.target_data->form() == RegionRef::Form::Named) {
          auto it = named_.find(inv.target_data->name());
          if (it != named_.end()) write(it->first, Bytes(it->second.size(), 0));
        }
        break;
      case CapabilityKind::Inject:
        if (inv.entry_point == "framework" && inv.message &&
            inv.message->data.size() <= layout::kHookSlotSize) {
          Bytes slot(layout::kHookSlotSize, 0);
          std::copy(inv.message->data.begin(), inv.message->data.end(), slot.begin());
          write("framework.hook", slot);
        }
        break;
      case CapabilityKind::Exploit:
        if (const ExploitDescriptor* d = registry_.find(inv.entry_point.value_or("")))
          for (const auto& w : d->claimed)
            if (!w.region.empty() && w.region.front() == '@') {
              auto it = named_.find(w.region.substr(1));
              if (it != named_.end() && it->second.size() == w.value.size()) it->second = w.value;
            }
        break;
      default:
        break;
    }
  }

  const Plan& plan_;
  const ConstraintTable& table_;
  const StageMap& stages_;
  const DescriptorRegistry& registry_;
  std::map<std::string, Bytes> named_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_plan(const Plan& plan, const ConstraintTable& table,
                               const StageMap& stages, const DescriptorRegistry& registry) {
  return Checker(plan, table, stages, registry).run();
}

}  // namespace forenskit
