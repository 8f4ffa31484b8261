// forenskit command-line front end.
//
// Exit codes: 0 ok, 1 validation failure, 2 execution rejection,
// 3 I/O or parse error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "forenskit/executor.hpp"
#include "forenskit/fixtures.hpp"
#include "forenskit/manifest.hpp"
#include "forenskit/plan.hpp"
#include "forenskit/report.hpp"
#include "forenskit/serialize.hpp"
#include "forenskit/validate.hpp"

namespace fs = std::filesystem;
using namespace forenskit;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRejected = 2;
constexpr int kIoError = 3;

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_findings(const ValidationReport& report) {
  for (const auto& f : report.findings) {
    std::cerr << (f.severity == Severity::Error ? "error" : "warning") << " [" << f.rule << "]";
    if (f.stage) std::cerr << " " << to_string(*f.stage);
    if (f.invocation) std::cerr << "#" << *f.invocation + 1;
    std::cerr << ": " << f.message << '\n';
  }
}

int cmd_validate(const std::string& plan_path, const std::string& level) {
  Plan plan = load_plan(plan_path);
  if (!level.empty()) plan.level = *parse_level(level);
  ValidationReport report = validate_plan(plan);
  print_findings(report);
  std::cout << (report.valid() ? "valid" : "invalid") << " (" << report.error_count()
            << " error(s), " << report.findings.size() - report.error_count()
            << " warning(s))\n";
  return report.valid() ? kOk : kInvalid;
}

struct RunArgs {
  std::string plan;
  std::string fixture;
  std::string level;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<double> fault_rate;
  std::uint64_t fault_seed = 0;
  std::string meaning_policy = "notes";
};

ReportConfig report_config(const std::string& policy) {
  ReportConfig c;
  c.meaning_policy = policy == "violated" ? MeaningPolicy::Violated : MeaningPolicy::WithNotes;
  return c;
}

void write_reports(const ExecutionTrace& trace, const fs::path& dir, const ReportConfig& config) {
  write_file(dir / "audit.jsonl", custody_jsonl(trace));
  write_file(dir / "custody.txt", custody_text(trace));
  write_file(dir / "soundness.json",
             to_json(soundness_report(trace, trace.level(), config)).dump(2) + "\n");
  write_file(dir / "matrix.json", to_json(feature_matrix(trace)).dump(2) + "\n");
}

int cmd_run(const RunArgs& args) {
  Plan plan = load_plan(args.plan);
  if (!args.level.empty()) plan.level = *parse_level(args.level);
  FixtureManifest manifest = load_manifest(args.fixture);
  Device device = Device::build(manifest, args.seed);

  ExecuteOptions opts;
  opts.seed = args.seed;
  opts.fault = FaultConfig::from_env();
  if (args.fault_rate) opts.fault = {args.fault_seed, *args.fault_rate};

  ExecutionResult result = execute_plan(plan, std::move(device), opts);
  print_findings(result.validation);
  if (!result.executed()) {
    std::cerr << "plan failed validation; nothing was run\n";
    return kInvalid;
  }
  const ExecutionTrace& trace = *result.trace;

  const fs::path dir(args.out);
  std::error_code ec;
  fs::create_directories(dir / "images", ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  save_trace(trace, (dir / "trace.json").string());
  write_reports(trace, dir, report_config(args.meaning_policy));
  for (const WorkstationItem* item : result.workstation->items()) {
    const bool image = item->kind == ItemKind::Image;
    write_file(dir / "images" / (item->id + (image ? ".img" : ".bin")),
               std::string_view(reinterpret_cast<const char*>(item->data.data()), item->data.size()));
  }

  std::size_t not_completed = 0;
  for (const auto& r : trace.records) not_completed += r.status != InvocationStatus::Completed;
  std::cout << trace.records.size() << " invocation(s), " << not_completed
            << " not completed, " << trace.artifacts.size() << " artifact(s)";
  if (trace.halted) std::cout << "; halted at #" << *trace.halted_at;
  std::cout << "\noutputs in " << dir.string() << '\n';
  return not_completed == 0 && !trace.halted ? kOk : kRejected;
}

int cmd_report(const std::string& dir_arg, bool matrix, bool soundness, bool custody, bool verify,
               const std::string& policy) {
  const fs::path dir(dir_arg);
  ExecutionTrace trace = load_trace((dir / "trace.json").string());
  if (!matrix && !soundness && !custody && !verify) matrix = soundness = true;
  if (soundness)
    std::cout << to_json(soundness_report(trace, trace.level(), report_config(policy))).dump(2)
              << '\n';
  if (matrix) {
    std::cout << to_json(feature_matrix(trace)).dump(2) << '\n';
    std::cout << render_matrix_table(feature_matrix(trace));
  }
  if (custody) std::cout << custody_text(trace);
  if (verify) {
    bool ok = true;
    for (const char* name : {"audit.jsonl", "custody.txt"}) {
      const bool good = verify_custody(read_file(dir / name), trace.digest_algorithm);
      std::cout << name << ": " << (good ? "verified" : "TAMPERED") << '\n';
      ok = ok && good;
    }
    if (!ok) return kIoError;
  }
  return kOk;
}

int cmd_fixtures(std::uint64_t seed, std::size_t apps, const std::string& out) {
  const std::string text = manifest_to_json(generate_manifest(seed, apps)).dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forenskit: forensic methodology simulator"};
  app.require_subcommand(1);
  const std::vector<std::string> levels{"strict", "standard"};

  std::string plan_path, level;
  auto* validate = app.add_subcommand("validate", "Statically validate a plan");
  validate->add_option("plan", plan_path, "Plan file")->required();
  validate->add_option("--level", level, "Override the plan level")
      ->check(CLI::IsMember(levels));

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Execute a plan against a simulated device");
  run->add_option("plan", run_args.plan, "Plan file")->required();
  run->add_option("--fixture", run_args.fixture, "Fixture manifest (JSON)")->required();
  run->add_option("--level", run_args.level, "Override the plan level")
      ->check(CLI::IsMember(levels));
  run->add_option("--seed", run_args.seed, "Device layout seed");
  run->add_option("--out", run_args.out, "Output directory")->required();
  run->add_option("--fault-rate", run_args.fault_rate, "Transfer corruption rate")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--fault-seed", run_args.fault_seed, "Transfer corruption seed");
  run->add_option("--meaning-policy", run_args.meaning_policy,
                  "Unanalysed unknown-meaning artifacts: notes or violated")
      ->check(CLI::IsMember({"notes", "violated"}));

  std::string trace_dir, report_policy = "notes";
  bool matrix = false, soundness = false, custody = false, verify = false;
  auto* report = app.add_subcommand("report", "Render reports from a run directory");
  report->add_option("trace-dir", trace_dir, "Directory written by run")->required();
  report->add_flag("--matrix", matrix, "Feature matrix");
  report->add_flag("--soundness", soundness, "Soundness report");
  report->add_flag("--custody", custody, "Human-readable custody log");
  report->add_flag("--verify", verify, "Verify custody log tails");
  report->add_option("--meaning-policy", report_policy)
      ->check(CLI::IsMember({"notes", "violated"}));

  std::uint64_t fx_seed = 0;
  std::size_t fx_apps = 6;
  std::string fx_out;
  auto* fixtures = app.add_subcommand("fixtures", "Fixture manifests");
  fixtures->require_subcommand(1);
  auto* generate = fixtures->add_subcommand("generate", "Generate a random manifest");
  generate->add_option("--seed", fx_seed, "Generator seed");
  generate->add_option("--apps", fx_apps, "Number of apps")->check(CLI::Range(1, 64));
  generate->add_option("--out", fx_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIoError;
  }

  try {
    if (*validate) return cmd_validate(plan_path, level);
    if (*run) return cmd_run(run_args);
    if (*report) return cmd_report(trace_dir, matrix, soundness, custody, verify, report_policy);
    if (*generate) return cmd_fixtures(fx_seed, fx_apps, fx_out);
  } catch (const Error& e) {
    std::cerr << "forenskit: " << e.what() << '\n';
    return e.code() == ErrorCode::ValidationFailed ? kInvalid : kIoError;
  } catch (const std::exception& e) {
    std::cerr << "forenskit: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}
