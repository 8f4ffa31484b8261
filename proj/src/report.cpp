#include "forenskit/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "forenskit/digest.hpp"
#include "forenskit/serialize.hpp"

namespace forenskit {

using nlohmann::json;

std::string_view to_string(CriterionStatus status) {
  switch (status) {
    case CriterionStatus::Satisfied: return "Satisfied";
    case CriterionStatus::SatisfiedWithNotes: return "SatisfiedWithNotes";
    case CriterionStatus::Violated: return "Violated";
  }
  return "?";
}

std::string_view to_string(FlashState state) {
  switch (state) {
    case FlashState::None: return "none";
    case FlashState::Recovery: return "recovery";
    case FlashState::Boot: return "boot";
    case FlashState::Both: return "both";
  }
  return "?";
}

const CriterionAssessment& SoundnessReport::at(Criterion c) const {
  return criteria[static_cast<std::size_t>(c)];
}

namespace {

bool allowed(const AuditRecord& r) { return r.decision.verdict == Verdict::Allow; }
bool completed(const AuditRecord& r) { return r.status == InvocationStatus::Completed; }

bool is_examination(const AuditRecord& r) {
  return r.invocation.kind == CapabilityKind::ForensicExamination;
}

bool is_analysis(const AuditRecord& r) {
  return is_examination(r) &&
         (r.stage == StageKind::AnalyzeApp || r.invocation.option("scope") == "app");
}

bool is_accounts_transmit(const AuditRecord& r) {
  return r.invocation.kind == CapabilityKind::Transmit && r.invocation.option("source") == "accounts";
}

void finalize(std::vector<std::uint64_t>& seqs) {
  std::sort(seqs.begin(), seqs.end());
  seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());
}

CriterionAssessment assess_errors(const ExecutionTrace& t) {
  CriterionAssessment a{Criterion::Errors, CriterionStatus::Satisfied, {}, {}};
  std::vector<std::uint64_t> violated, caught, verified;
  for (const auto& r : t.records) {
    const bool copy_mismatch = r.invocation.kind == CapabilityKind::ForensicCopy && completed(r) &&
                               r.source_digest && r.output_digest &&
                               *r.source_digest != *r.output_digest;
    if (allowed(r) && (r.decision.violated.contains(Criterion::Errors) || copy_mismatch)) {
      violated.push_back(r.seq);
    } else if (r.rolled_back || r.status == InvocationStatus::Rejected ||
               r.error == ErrorCode::DigestMismatch) {
      caught.push_back(r.seq);
    } else if (completed(r) && (!r.change_seqs.empty() || r.output_digest)) {
      verified.push_back(r.seq);
    }
  }
  if (!violated.empty()) {
    a.status = CriterionStatus::Violated;
    a.citations = violated;
    a.notes.push_back("allowed invocations with unverified or undeclared effects");
  } else if (!caught.empty()) {
    a.status = CriterionStatus::SatisfiedWithNotes;
    a.citations = caught;
    a.notes.push_back("errors detected and contained");
  } else {
    a.citations = verified;
  }
  return a;
}

CriterionAssessment assess_meaning(const ExecutionTrace& t, const ReportConfig& config) {
  CriterionAssessment a{Criterion::Meaning, CriterionStatus::Satisfied, {}, {}};
  std::vector<std::uint64_t> violated, analyses, examinations;
  for (const auto& r : t.records) {
    if (allowed(r) && r.decision.violated.contains(Criterion::Meaning)) violated.push_back(r.seq);
    if (is_analysis(r)) analyses.push_back(r.seq);
    if (is_examination(r) && completed(r)) examinations.push_back(r.seq);
  }
  const auto unknown = std::count_if(t.artifacts.begin(), t.artifacts.end(), [](const Artifact& x) {
    return x.meaning == MeaningStatus::Unknown;
  });
  if (!violated.empty()) {
    a.status = CriterionStatus::Violated;
    a.citations = violated;
    a.notes.push_back("evidential data destroyed or altered");
  } else if (unknown > 0) {
    const bool attempted = !analyses.empty();
    a.status = !attempted && config.meaning_policy == MeaningPolicy::Violated
                   ? CriterionStatus::Violated
                   : CriterionStatus::SatisfiedWithNotes;
    a.citations = attempted ? analyses : examinations;
    a.notes.push_back(std::to_string(unknown) + " artifact(s) of unknown meaning" +
                      (attempted ? " after app analysis" : "; no app analysis attempted"));
  } else {
    a.citations = examinations;
  }
  return a;
}

CriterionAssessment assess_transparency(const ExecutionTrace& t) {
  CriterionAssessment a{Criterion::TransparencyTrustworthiness, CriterionStatus::Satisfied, {}, {}};
  std::vector<std::uint64_t> violated, refused;
  for (const auto& r : t.records) {
    const bool flagged = r.opaque || r.decision.violated.contains(Criterion::TransparencyTrustworthiness);
    if (!flagged) continue;
    (allowed(r) ? violated : refused).push_back(r.seq);
  }
  if (!violated.empty()) {
    a.status = CriterionStatus::Violated;
    a.citations = violated;
    a.notes.push_back("opaque operations were performed");
  } else if (!refused.empty()) {
    a.status = CriterionStatus::SatisfiedWithNotes;
    a.citations = refused;
    a.notes.push_back("opaque operations were refused");
  }
  return a;
}

CriterionAssessment assess_experience(const ExecutionTrace& t) {
  CriterionAssessment a{Criterion::Experience, CriterionStatus::Satisfied, {}, {}};
  for (const auto& r : t.records)
    if (is_examination(r) && r.practitioner.experience == Experience::Novice)
      a.citations.push_back(r.seq);
  if (!a.citations.empty()) {
    a.status = CriterionStatus::SatisfiedWithNotes;
    a.notes.push_back("experience-dependent examination performed by a novice");
  }
  return a;
}

}  // namespace

SoundnessReport soundness_report(const ExecutionTrace& trace, SoundnessLevel level,
                                 const ReportConfig& config) {
  SoundnessReport rep;
  rep.level = level;
  rep.criteria[static_cast<std::size_t>(Criterion::Meaning)] = assess_meaning(trace, config);
  rep.criteria[static_cast<std::size_t>(Criterion::Errors)] = assess_errors(trace);
  rep.criteria[static_cast<std::size_t>(Criterion::TransparencyTrustworthiness)] =
      assess_transparency(trace);
  rep.criteria[static_cast<std::size_t>(Criterion::Experience)] = assess_experience(trace);
  for (auto& c : rep.criteria) finalize(c.citations);
  return rep;
}

json to_json(const SoundnessReport& report) {
  json criteria = json::object();
  for (const auto& c : report.criteria)
    criteria[std::string(to_string(c.criterion))] = {
        {"status", to_string(c.status)}, {"citations", c.citations}, {"notes", c.notes}};
  return {{"level", to_string(report.level)}, {"criteria", criteria}};
}

FeatureMatrix feature_matrix(const ExecutionTrace& t) {
  FeatureMatrix m;
  std::map<std::uint64_t, const ChangeRecord*> changes;
  for (const auto& c : t.ledger) changes[c.seq] = &c;
  std::optional<Region> su;
  if (auto it = t.named_regions.find("system.su"); it != t.named_regions.end()) su = it->second;

  std::vector<std::uint64_t> all, mutating, rooted, boot, recovery, copies, creds, transmits,
      examinations, sdcard, external;
  bool copies_match = true;
  std::set<std::string> explicit_sdcard;
  for (const auto& stage : t.plan.stages)
    for (const auto& inv : stage.invocations)
      if (inv.target_data && inv.target_data->name() == "sdcard")
        explicit_sdcard.insert(inv.target_data->text());

  for (const auto& r : t.records) {
    all.push_back(r.seq);
    if (!r.change_seqs.empty()) mutating.push_back(r.seq);
    for (std::uint64_t cs : r.change_seqs) {
      auto it = changes.find(cs);
      if (it == changes.end()) continue;
      const Region& reg = it->second->region;
      if (su && reg.intersects(*su)) rooted.push_back(r.seq);
      if (reg.store == "boot") boot.push_back(r.seq);
      if (reg.store == "recovery") recovery.push_back(r.seq);
    }
    const CapabilityInvocation& inv = r.invocation;
    if (inv.kind == CapabilityKind::ForensicCopy && completed(r)) {
      copies.push_back(r.seq);
      const std::string part = inv.target_data ? inv.target_data->name() : "";
      auto pre = r.pre_digests.find(part);
      if (!r.source_digest || !r.output_digest || *r.source_digest != *r.output_digest ||
          pre == r.pre_digests.end() || pre->second != *r.source_digest)
        copies_match = false;
    }
    if (is_accounts_transmit(r)) {
      transmits.push_back(r.seq);
      if (completed(r)) creds.push_back(r.seq);
    }
    if (is_examination(r) && completed(r)) examinations.push_back(r.seq);
    const bool missing_sdcard =
        r.error == ErrorCode::UnknownPartition ||
        std::find(r.notes.begin(), r.notes.end(), "no-external-storage") != r.notes.end();
    const bool names_sdcard = inv.target_data && explicit_sdcard.count(inv.target_data->text());
    if (!r.derived && (names_sdcard || (missing_sdcard && inv.target_data &&
                                        inv.target_data->name() == "sdcard")))
      sdcard.push_back(r.seq);
    if (r.stage == StageKind::ExamineExternalStorage && completed(r)) external.push_back(r.seq);
  }

  auto cite = [&](const char* field, std::vector<std::uint64_t> seqs,
                  const std::vector<std::uint64_t>& fallback) {
    if (seqs.empty()) seqs = fallback;
    if (seqs.empty()) seqs = all;
    finalize(seqs);
    m.citations[field] = std::move(seqs);
  };

  m.rooted_required = !rooted.empty();
  cite("rooted_required", rooted, mutating);

  if (!boot.empty() && !recovery.empty()) m.partition_flashed = FlashState::Both;
  else if (!boot.empty()) m.partition_flashed = FlashState::Boot;
  else if (!recovery.empty()) m.partition_flashed = FlashState::Recovery;
  std::vector<std::uint64_t> flashed = boot;
  flashed.insert(flashed.end(), recovery.begin(), recovery.end());
  cite("partition_flashed", flashed, mutating);

  m.bit_for_bit_copy = !copies.empty() && copies_match;
  cite("bit_for_bit_copy", copies, {});

  m.secure_credentials_collected = !creds.empty();
  cite("secure_credentials_collected", creds, transmits);

  m.sdcard_required = !sdcard.empty();
  std::vector<std::uint64_t> without = external;
  without.insert(without.end(), copies.begin(), copies.end());
  cite("sdcard_required", sdcard, without);

  m.analyzes_data = !examinations.empty();
  cite("analyzes_data", examinations, {});
  return m;
}

json to_json(const FeatureMatrix& m) {
  auto field = [&](const char* name, json value) {
    return json{{"value", std::move(value)}, {"citations", m.citations.at(name)}};
  };
  return {{"rooted_required", field("rooted_required", m.rooted_required)},
          {"partition_flashed", field("partition_flashed", to_string(m.partition_flashed))},
          {"bit_for_bit_copy", field("bit_for_bit_copy", m.bit_for_bit_copy)},
          {"secure_credentials_collected",
           field("secure_credentials_collected", m.secure_credentials_collected)},
          {"sdcard_required", field("sdcard_required", m.sdcard_required)},
          {"analyzes_data", field("analyzes_data", m.analyzes_data)}};
}

const std::vector<MethodologyColumn>& published_methodologies() {
  static const std::vector<MethodologyColumn> columns{
      {"Votipka et al.", "No", "Yes, recovery partition", "Yes", "No", "No", "No"},
      {"Vidas et al.", "No", "Yes, recovery partition", "Yes", "No", "No", "No"},
      {"Son et al.", "No", "Yes, boot partition", "No", "No", "No", "No"},
      {"Lessard and Kessler", "Yes", "No", "No", "No", "Yes", "Yes"},
      {"Chen et al.", "No", "Yes, recovery partition", "No", "No", "Yes", "No"},
  };
  return columns;
}

MethodologyColumn matrix_column(const FeatureMatrix& m, std::string name) {
  auto yn = [](bool b) { return std::string(b ? "Yes" : "No"); };
  std::string flashed;
  switch (m.partition_flashed) {
    case FlashState::None: flashed = "No"; break;
    case FlashState::Recovery: flashed = "Yes, recovery partition"; break;
    case FlashState::Boot: flashed = "Yes, boot partition"; break;
    case FlashState::Both: flashed = "Yes, boot and recovery partitions"; break;
  }
  return {std::move(name), yn(m.rooted_required), flashed, yn(m.bit_for_bit_copy),
          yn(m.secure_credentials_collected), yn(m.sdcard_required), yn(m.analyzes_data)};
}

std::string render_matrix_table(const FeatureMatrix& matrix) {
  std::vector<MethodologyColumn> cols{matrix_column(matrix, "This run")};
  const auto& published = published_methodologies();
  cols.insert(cols.end(), published.begin(), published.end());
  const std::vector<std::pair<std::string, std::string MethodologyColumn::*>> rows{
      {"Requirement or outcome", &MethodologyColumn::name},
      {"Device rooted", &MethodologyColumn::rooted_required},
      {"Recovery/boot partition flashed", &MethodologyColumn::partition_flashed},
      {"Bit-for-bit physical copy", &MethodologyColumn::bit_for_bit_copy},
      {"Secure credential storage collected", &MethodologyColumn::secure_credentials_collected},
      {"External SD card required", &MethodologyColumn::sdcard_required},
      {"Analyzes collected data", &MethodologyColumn::analyzes_data},
  };
  std::size_t label_w = 0;
  for (const auto& [label, _] : rows) label_w = std::max(label_w, label.size());
  std::vector<std::size_t> widths;
  for (const auto& c : cols) {
    std::size_t w = 0;
    for (const auto& [_, member] : rows) w = std::max(w, (c.*member).size());
    widths.push_back(w);
  }
  std::ostringstream out;
  for (const auto& [label, member] : rows) {
    out << label << std::string(label_w - label.size(), ' ');
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string& cell = cols[i].*member;
      out << " | " << cell << std::string(widths[i] - cell.size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

namespace {

constexpr std::string_view kChainSeed = "FSK-CUSTODY-v1";

/// Escapes control and non-ASCII bytes so every entry stays on one line.
std::string clean(std::string_view s) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c < 0x20 || c >= 0x7f) {
      out += "\\x";
      out += hex[c >> 4];
      out += hex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s.empty() ? "-" : s;
}

class Chain {
 public:
  explicit Chain(std::string_view algorithm)
      : algorithm_(algorithm), head_(compute_digest(kChainSeed, algorithm)) {}

  void add(std::string_view line) {
    Hasher h(algorithm_);
    h.update(ByteView(head_.bytes));
    h.update(line);
    head_ = h.finish();
  }
  const Digest& head() const { return head_; }

 private:
  std::string algorithm_;
  Digest head_;
};

std::string render(const std::vector<std::string>& lines, std::string_view algorithm,
                   bool jsonl) {
  Chain chain(algorithm);
  std::string out;
  for (const auto& l : lines) {
    chain.add(l);
    out += l;
    out += '\n';
  }
  out += jsonl ? R"({"tail":")" + chain.head().hex() + "\"}" : "TAIL " + chain.head().hex();
  out += '\n';
  return out;
}

std::string algorithm_of(const ExecutionTrace& t) {
  return t.digest_algorithm.empty() ? std::string(kDefaultDigestAlgorithm) : t.digest_algorithm;
}

}  // namespace

std::string custody_jsonl(const ExecutionTrace& t) {
  std::vector<std::string> lines;
  json header{{"custody", "forenskit-v1"},
              {"level", to_string(t.level())},
              {"practitioner", {{"id", t.practitioner().id},
                                {"experience", to_string(t.practitioner().experience)}}},
              {"seed", t.seed},
              {"digest_algorithm", algorithm_of(t)},
              {"records", t.records.size()},
              {"halted", t.halted}};
  lines.push_back(header.dump(-1, ' ', false, json::error_handler_t::replace));
  for (const auto& r : t.records)
    lines.push_back(to_json(r).dump(-1, ' ', false, json::error_handler_t::replace));
  return render(lines, algorithm_of(t), true);
}

std::string custody_text(const ExecutionTrace& t) {
  std::vector<std::string> lines;
  lines.push_back("CUSTODY forenskit-v1 level=" + std::string(to_string(t.level())) +
                  " practitioner=" + clean(t.practitioner().id) + "/" +
                  std::string(to_string(t.practitioner().experience)) +
                  " seed=" + std::to_string(t.seed) + " digest=" + algorithm_of(t) +
                  " records=" + std::to_string(t.records.size()) +
                  (t.halted ? " halted" : ""));
  for (const auto& r : t.records) {
    std::ostringstream l;
    l << "#" << r.seq << " tick=" << r.tick
      << " stage=" << (r.stage ? std::string(to_string(*r.stage)) : "-") << " "
      << to_string(r.invocation.kind);
    for (const auto& [k, v] : encode_params(r.invocation)) l << " " << k << "=" << clean(v);
    l << " | " << to_string(r.decision.verdict);
    for (Criterion c : kAllCriteria)
      if (r.decision.violated.contains(c)) l << " !" << to_string(c);
    l << " | " << to_string(r.status);
    if (r.error) l << " " << to_string(*r.error) << ": " << clean(r.error_message);
    l << " | changes=" << join(r.change_seqs);
    if (r.source_digest) l << " source=" << r.source_digest->hex();
    if (r.output_digest) l << " output=" << r.output_digest->hex();
    if (!r.output_item.empty()) l << " item=" << clean(r.output_item);
    if (r.derived) l << " derived";
    if (r.rolled_back) l << " rolled-back";
    if (r.fault_injected) l << " fault-injected";
    if (r.corrupt_ref) l << " corrupt-ref=" << *r.corrupt_ref;
    l << " params=" << r.params_digest.hex();
    for (const auto& n : r.notes) l << " ; " << clean(n);
    lines.push_back(l.str());
  }
  return render(lines, algorithm_of(t), false);
}

bool verify_custody(std::string_view log, std::string_view algorithm) {
  if (log.empty() || log.back() != '\n') return false;
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < log.size()) {
    std::size_t nl = log.find('\n', start);
    lines.push_back(log.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.size() < 2) return false;
  Chain chain(algorithm);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) chain.add(lines[i]);
  const std::string_view tail = lines.back();
  const std::string hex = chain.head().hex();
  return tail == "TAIL " + hex || tail == R"({"tail":")" + hex + "\"}";
}

}  // namespace forenskit
