#pragma once

// Reports rendered from an execution trace: soundness assessment, feature
// matrix and the tamper-evident custody log.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "forenskit/trace.hpp"

namespace forenskit {

enum class CriterionStatus : std::uint8_t { Satisfied, SatisfiedWithNotes, Violated };

std::string_view to_string(CriterionStatus status);

/// Treatment of Unknown-meaning artifacts when no app analysis was tried.
enum class MeaningPolicy : std::uint8_t { WithNotes, Violated };

struct ReportConfig {
  MeaningPolicy meaning_policy = MeaningPolicy::WithNotes;
};

struct CriterionAssessment {
  Criterion criterion = Criterion::Meaning;
  CriterionStatus status = CriterionStatus::Satisfied;
  std::vector<std::uint64_t> citations;  // audit seqs
  std::vector<std::string> notes;

  bool operator==(const CriterionAssessment&) const = default;
};

struct SoundnessReport {
  SoundnessLevel level = SoundnessLevel::Strict;
  std::array<CriterionAssessment, kCriterionCount> criteria;

  const CriterionAssessment& at(Criterion c) const;
  bool operator==(const SoundnessReport&) const = default;
};

SoundnessReport soundness_report(const ExecutionTrace& trace, SoundnessLevel level,
                                 const ReportConfig& config = {});
nlohmann::json to_json(const SoundnessReport& report);

enum class FlashState : std::uint8_t { None, Recovery, Boot, Both };

std::string_view to_string(FlashState state);

struct FeatureMatrix {
  bool rooted_required = false;
  FlashState partition_flashed = FlashState::None;
  bool bit_for_bit_copy = false;
  bool secure_credentials_collected = false;
  bool sdcard_required = false;
  bool analyzes_data = false;
  /// Field name -> supporting audit seqs. Every field has an entry.
  std::map<std::string, std::vector<std::uint64_t>> citations;

  bool operator==(const FeatureMatrix&) const = default;
};

FeatureMatrix feature_matrix(const ExecutionTrace& trace);
nlohmann::json to_json(const FeatureMatrix& matrix);

/// Published comparison columns, shipped as documented data.
struct MethodologyColumn {
  std::string name;
  std::string rooted_required;
  std::string partition_flashed;
  std::string bit_for_bit_copy;
  std::string secure_credentials_collected;
  std::string sdcard_required;
  std::string analyzes_data;
};

const std::vector<MethodologyColumn>& published_methodologies();
/// Column for a computed matrix, in the published wording.
MethodologyColumn matrix_column(const FeatureMatrix& matrix, std::string name);
/// Plain-text comparison table of the computed column and the published ones.
std::string render_matrix_table(const FeatureMatrix& matrix);

/// Machine-readable custody log: one JSON header line, one line per audit
/// record, and a tail line carrying the hash chain over all prior lines.
std::string custody_jsonl(const ExecutionTrace& trace);
/// Human-readable custody log with the same chain construction.
std::string custody_text(const ExecutionTrace& trace);
/// True when the tail matches the chain recomputed over the body. Accepts
/// either rendering.
bool verify_custody(std::string_view log, std::string_view algorithm = kDefaultDigestAlgorithm);

}  // namespace forenskit
