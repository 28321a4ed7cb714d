// lgtbids: scenario validation, Monte Carlo runs and report emission.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lgtbids/lgtbids.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

bool is_validation(lgtbids::ErrorCode c) {
  using lgtbids::ErrorCode;
  return c == ErrorCode::SyntaxError || c == ErrorCode::ValidationError ||
         c == ErrorCode::UnknownKey;
}

struct RunFlags {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string format = "all";
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--scenario", f.scenario, "Scenario file")->required();
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--trials", f.trials, "Override the scenario's trial count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Override the scenario's master seed");
  cmd->add_option("--threads", f.threads, "Trial-level worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--format", f.format,
                  "csv | json | all, or a comma list of summary,envelopes,report,layers,edges")
      ->capture_default_str();
}

void print_summary(const lgtbids::RunArtifacts& a, double wall_seconds) {
  const auto& m = a.summary.overall;
  const auto& c = a.summary.overall_counts;
  std::cout << "trials " << a.summary.trials << "  tp " << c.tp << "  fp " << c.fp << "  tn "
            << c.tn << "  fn " << c.fn << '\n'
            << "accuracy " << lgtbids::format_percent2(m.accuracy) << "%  detection_rate "
            << lgtbids::format_percent2(m.detection_rate) << "%  far "
            << lgtbids::format_percent2(m.far) << "%\n"
            << "mean detection time " << a.summary.mean_detection_seconds << " s  wall "
            << wall_seconds << " s\n";
}

int do_run(const RunFlags& f, lgtbids::ScoringMode mode) {
  const lgtbids::OutputSelection sel = lgtbids::parse_output_selection(f.format);
  const lgtbids::Scenario s = lgtbids::load_scenario(f.scenario);
  lgtbids::RunOptions opt;
  opt.threads = f.threads;
  opt.mode = mode;
  opt.trials = f.trials;
  opt.seed = f.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const lgtbids::RunArtifacts a = lgtbids::run(s, opt);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& p : lgtbids::emit(a, sel, f.out)) std::cout << "wrote " << p.string() << '\n';
  print_summary(a, wall);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layer-wise graph-based intrusion detection simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("--scenario", validate_path, "Scenario file")->required();

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run the screened detector over all trials");
  add_run_flags(run, run_flags);

  RunFlags scan_flags;
  CLI::App* scan =
      app.add_subcommand("scan", "Run all trials and score the full-scan oracle instead");
  add_run_flags(scan, scan_flags);

  std::string report_path;
  std::string emit_out = "out";
  std::string emit_format = "all";
  CLI::App* emit = app.add_subcommand("emit", "Re-emit output files from a saved report.json");
  emit->add_option("--report", report_path, "report.json written by run or scan")->required();
  emit->add_option("--out", emit_out, "Output directory")->capture_default_str();
  emit->add_option("--format", emit_format, "csv | json | all, or a comma list")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*validate) {
      const lgtbids::Scenario s = lgtbids::load_scenario(validate_path);
      const auto topo = lgtbids::build_topology(s.nodes, s.plain_edges());
      std::cout << "ok: " << s.nodes.size() << " nodes, " << s.edges.size() << " edges, "
                << topo.layer_count() << " layers, " << s.attacks.size() << " attack block(s), "
                << s.trials << " trial(s)\n";
      return kExitOk;
    }
    if (*run) return do_run(run_flags, lgtbids::ScoringMode::Screened);
    if (*scan) return do_run(scan_flags, lgtbids::ScoringMode::FullScan);
    if (*emit) {
      const lgtbids::RunArtifacts a = lgtbids::load_report(report_path);
      for (const auto& p : lgtbids::emit(a, lgtbids::parse_output_selection(emit_format), emit_out))
        std::cout << "wrote " << p.string() << '\n';
      return kExitOk;
    }
  } catch (const lgtbids::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
