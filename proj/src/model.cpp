#include "forenskit/model.hpp"

namespace forenskit {

namespace {

using C = Criterion;
using K = CapabilityKind;

ConstraintTable build_constraint_table() {
  ConstraintTable t;
  auto set = [&t](K k, CriterionSet criteria, RuleTag rule, bool mutating) {
    t.entries_[static_cast<std::size_t>(k)] = {criteria, rule, mutating};
  };
  // Corrupt is realised as a declared full-state read, hence non-mutating.
  set(K::Corrupt, {C::Errors, C::TransparencyTrustworthiness},
      RuleTag::RequireDeclaredEffects, false);
  set(K::Delete, {C::Errors, C::Meaning}, RuleTag::ForbidEvidentialMutation, true);
  // Operates on collected data only.
  set(K::EncryptDecrypt, {}, RuleTag::Unconstrained, false);
  set(K::Exploit, {C::Errors, C::TransparencyTrustworthiness},
      RuleTag::ForbidOpaquePayload, true);
  set(K::ForensicCopy, {C::Errors}, RuleTag::RequireDeclaredEffects, false);
  set(K::ForensicExamination, {C::Meaning}, RuleTag::RequireDeclaredEffects, false);
  set(K::Inject, {C::Errors, C::TransparencyTrustworthiness, C::Meaning},
      RuleTag::ForbidOpaquePayload, true);
  set(K::Listen, {C::Meaning, C::Errors, C::TransparencyTrustworthiness},
      RuleTag::RequireDeclaredEffects, false);
  set(K::Modify, {C::Errors, C::TransparencyTrustworthiness, C::Meaning},
      RuleTag::ForbidEvidentialMutation, true);
  set(K::Transmit, {C::Meaning, C::Errors, C::TransparencyTrustworthiness},
      RuleTag::RequireDeclaredEffects, false);
  return t;
}

StageMap build_stage_map() {
  StageMap m;
  const CriterionSet all_three{C::Errors, C::TransparencyTrustworthiness, C::Meaning};
  auto set = [&m](StageKind s, CapabilitySet caps, CriterionSet constraints,
                  Adherence adherence) {
    m.rows_[static_cast<std::size_t>(s)] = {caps, constraints, adherence};
  };
  set(StageKind::SetupBootloader, {K::Exploit, K::Modify}, all_three,
      Adherence::ImplementationDependent);
  set(StageKind::BootLiveOS, {K::Inject}, all_three, Adherence::Adheres);
  set(StageKind::CollectPhysicalImage, {K::ForensicCopy}, {}, Adherence::NotApplicable);
  set(StageKind::ExaminePrivateStorage, {K::ForensicExamination}, {C::Meaning},
      Adherence::ExperienceDependent);
  set(StageKind::ExamineExternalStorage, {K::ForensicExamination}, {C::Meaning},
      Adherence::ExperienceDependent);
  set(StageKind::ExamineDatabases, {K::ForensicExamination}, {C::Meaning},
      Adherence::ExperienceDependent);
  set(StageKind::ExamineAccounts, {K::Inject, K::Modify, K::Transmit}, all_three,
      Adherence::Adheres);
  set(StageKind::AnalyzeApp, {K::ForensicExamination}, {C::Meaning},
      Adherence::ExperienceDependent);
  return m;
}

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view name, const std::array<Enum, N>& all) {
  for (Enum e : all)
    if (to_string(e) == name) return e;
  return std::nullopt;
}

}  // namespace

const ConstraintTable& canonical_constraint_table() {
  static const ConstraintTable table = build_constraint_table();
  return table;
}

const StageMap& canonical_stage_map() {
  static const StageMap map = build_stage_map();
  return map;
}

CriterionSet applicable_constraints(CapabilityKind kind, SoundnessLevel level) {
  if (level == SoundnessLevel::Standard) return {};
  return canonical_constraint_table().lookup(kind).strict_criteria;
}

int stage_rank(StageKind stage) { return static_cast<int>(stage); }

bool stage_precedes(StageKind a, StageKind b) { return stage_rank(a) < stage_rank(b); }

std::string_view to_string(CapabilityKind kind) {
  switch (kind) {
    case K::Corrupt: return "Corrupt";
    case K::Delete: return "Delete";
    case K::EncryptDecrypt: return "EncryptDecrypt";
    case K::Exploit: return "Exploit";
    case K::ForensicCopy: return "ForensicCopy";
    case K::ForensicExamination: return "ForensicExamination";
    case K::Inject: return "Inject";
    case K::Listen: return "Listen";
    case K::Modify: return "Modify";
    case K::Transmit: return "Transmit";
  }
  return "?";
}

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case C::Meaning: return "Meaning";
    case C::Errors: return "Errors";
    case C::TransparencyTrustworthiness: return "TransparencyTrustworthiness";
    case C::Experience: return "Experience";
  }
  return "?";
}

std::string_view to_string(SoundnessLevel level) {
  return level == SoundnessLevel::Strict ? "strict" : "standard";
}

std::string_view to_string(StageKind stage) {
  switch (stage) {
    case StageKind::SetupBootloader: return "SetupBootloader";
    case StageKind::BootLiveOS: return "BootLiveOS";
    case StageKind::CollectPhysicalImage: return "CollectPhysicalImage";
    case StageKind::ExaminePrivateStorage: return "ExaminePrivateStorage";
    case StageKind::ExamineExternalStorage: return "ExamineExternalStorage";
    case StageKind::ExamineDatabases: return "ExamineDatabases";
    case StageKind::ExamineAccounts: return "ExamineAccounts";
    case StageKind::AnalyzeApp: return "AnalyzeApp";
  }
  return "?";
}

std::string_view to_string(Experience experience) {
  switch (experience) {
    case Experience::Novice: return "novice";
    case Experience::Competent: return "competent";
    case Experience::Expert: return "expert";
  }
  return "?";
}

std::string_view to_string(RuleTag rule) {
  switch (rule) {
    case RuleTag::ForbidEvidentialMutation: return "forbid-evidential-mutation";
    case RuleTag::ForbidOpaquePayload: return "forbid-opaque-payload";
    case RuleTag::RequireDeclaredEffects: return "require-declared-effects";
    case RuleTag::Unconstrained: return "unconstrained";
  }
  return "?";
}

std::string_view to_string(Adherence adherence) {
  switch (adherence) {
    case Adherence::Adheres: return "adheres";
    case Adherence::ImplementationDependent: return "implementation-dependent";
    case Adherence::ExperienceDependent: return "experience-dependent";
    case Adherence::NotApplicable: return "not-applicable";
  }
  return "?";
}

std::optional<CapabilityKind> parse_capability(std::string_view name) {
  return parse_enum(name, kAllCapabilities);
}
std::optional<Criterion> parse_criterion(std::string_view name) {
  return parse_enum(name, kAllCriteria);
}
std::optional<SoundnessLevel> parse_level(std::string_view name) {
  return parse_enum(name, kAllLevels);
}
std::optional<StageKind> parse_stage(std::string_view name) {
  return parse_enum(name, kAllStages);
}
std::optional<Experience> parse_experience(std::string_view name) {
  return parse_enum(name, std::array{Experience::Novice, Experience::Competent,
                                     Experience::Expert});
}

}  // namespace forenskit
