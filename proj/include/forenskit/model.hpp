#pragma once

// The adversary model: the ten capabilities, the four soundness criteria,
// the two soundness levels, and the canonical capability and stage tables.
// Everything here is an immutable value and safe to share across threads.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace forenskit {

enum class CapabilityKind : std::uint8_t {
  Corrupt,
  Delete,
  EncryptDecrypt,
  Exploit,
  ForensicCopy,
  ForensicExamination,
  Inject,
  Listen,
  Modify,
  Transmit,
};

inline constexpr std::size_t kCapabilityCount = 10;
inline constexpr std::array<CapabilityKind, kCapabilityCount> kAllCapabilities{
    CapabilityKind::Corrupt,        CapabilityKind::Delete,
    CapabilityKind::EncryptDecrypt, CapabilityKind::Exploit,
    CapabilityKind::ForensicCopy,   CapabilityKind::ForensicExamination,
    CapabilityKind::Inject,         CapabilityKind::Listen,
    CapabilityKind::Modify,         CapabilityKind::Transmit,
};

enum class Criterion : std::uint8_t {
  Meaning,
  Errors,
  TransparencyTrustworthiness,
  Experience,
};

inline constexpr std::size_t kCriterionCount = 4;
inline constexpr std::array<Criterion, kCriterionCount> kAllCriteria{
    Criterion::Meaning, Criterion::Errors,
    Criterion::TransparencyTrustworthiness, Criterion::Experience};

enum class SoundnessLevel : std::uint8_t { Strict, Standard };

inline constexpr std::array<SoundnessLevel, 2> kAllLevels{
    SoundnessLevel::Strict, SoundnessLevel::Standard};

enum class StageKind : std::uint8_t {
  SetupBootloader,
  BootLiveOS,
  CollectPhysicalImage,
  ExaminePrivateStorage,
  ExamineExternalStorage,
  ExamineDatabases,
  ExamineAccounts,
  AnalyzeApp,
};

inline constexpr std::size_t kStageCount = 8;
inline constexpr std::array<StageKind, kStageCount> kAllStages{
    StageKind::SetupBootloader,        StageKind::BootLiveOS,
    StageKind::CollectPhysicalImage,   StageKind::ExaminePrivateStorage,
    StageKind::ExamineExternalStorage, StageKind::ExamineDatabases,
    StageKind::ExamineAccounts,        StageKind::AnalyzeApp,
};

enum class Experience : std::uint8_t { Novice, Competent, Expert };

enum class RuleTag : std::uint8_t {
  ForbidEvidentialMutation,
  ForbidOpaquePayload,
  RequireDeclaredEffects,
  Unconstrained,
};

enum class Adherence : std::uint8_t {
  Adheres,
  ImplementationDependent,
  ExperienceDependent,
  NotApplicable,
};

// Small bitset over an enum with at most 16 members.
template <typename Enum>
class EnumSet {
 public:
  constexpr EnumSet() = default;
  constexpr EnumSet(std::initializer_list<Enum> items) {
    for (Enum e : items) insert(e);
  }
  static constexpr EnumSet from_mask(std::uint16_t mask) {
    EnumSet s;
    s.mask_ = mask;
    return s;
  }

  constexpr void insert(Enum e) { mask_ |= bit(e); }
  constexpr void erase(Enum e) { mask_ &= static_cast<std::uint16_t>(~bit(e)); }
  constexpr bool contains(Enum e) const { return (mask_ & bit(e)) != 0; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint16_t mask() const { return mask_; }
  constexpr int size() const { return __builtin_popcount(mask_); }

  constexpr bool is_subset_of(EnumSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr EnumSet operator&(EnumSet o) const { return from_mask(mask_ & o.mask_); }
  constexpr EnumSet operator|(EnumSet o) const { return from_mask(mask_ | o.mask_); }
  constexpr bool operator==(const EnumSet&) const = default;

 private:
  static constexpr std::uint16_t bit(Enum e) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(e));
  }
  std::uint16_t mask_ = 0;
};

using CriterionSet = EnumSet<Criterion>;
using CapabilitySet = EnumSet<CapabilityKind>;

struct PractitionerProfile {
  std::string id = "anonymous";
  Experience experience = Experience::Competent;

  bool operator==(const PractitionerProfile&) const = default;
};

struct ConstraintEntry {
  CriterionSet strict_criteria;
  RuleTag rule = RuleTag::Unconstrained;
  bool mutating = false;

  bool operator==(const ConstraintEntry&) const = default;
};

class ConstraintTable {
 public:
  const ConstraintEntry& lookup(CapabilityKind kind) const {
    return entries_[static_cast<std::size_t>(kind)];
  }
  std::array<ConstraintEntry, kCapabilityCount> entries_{};

  bool operator==(const ConstraintTable&) const = default;
};

struct StageRow {
  CapabilitySet allowed;
  CriterionSet key_constraints;
  Adherence adherence = Adherence::NotApplicable;

  bool operator==(const StageRow&) const = default;
};

class StageMap {
 public:
  const StageRow& lookup(StageKind stage) const {
    return rows_[static_cast<std::size_t>(stage)];
  }
  std::array<StageRow, kStageCount> rows_{};

  bool operator==(const StageMap&) const = default;
};

const ConstraintTable& canonical_constraint_table();
const StageMap& canonical_stage_map();

/// Strict returns the canonical criterion set for `kind`; Standard gates
/// nothing and returns the empty set.
CriterionSet applicable_constraints(CapabilityKind kind, SoundnessLevel level);

/// Methodology order: a stage may only appear after the stages it follows.
/// The relation is a strict total order on the eight stages.
bool stage_precedes(StageKind a, StageKind b);
int stage_rank(StageKind stage);

std::string_view to_string(CapabilityKind kind);
std::string_view to_string(Criterion criterion);
std::string_view to_string(SoundnessLevel level);
std::string_view to_string(StageKind stage);
std::string_view to_string(Experience experience);
std::string_view to_string(RuleTag rule);
std::string_view to_string(Adherence adherence);

std::optional<CapabilityKind> parse_capability(std::string_view name);
std::optional<Criterion> parse_criterion(std::string_view name);
std::optional<SoundnessLevel> parse_level(std::string_view name);
std::optional<StageKind> parse_stage(std::string_view name);
std::optional<Experience> parse_experience(std::string_view name);

}  // namespace forenskit
