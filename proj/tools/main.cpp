// scholarmetrics command-line front end.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scholarmetrics/corpus_io.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/pipeline.hpp"
#include "scholarmetrics/testkit/synth.hpp"

namespace fs = std::filesystem;
using namespace scholarmetrics;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string output_dir;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config, "Run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", args.overrides, "Override a config key (table.key=value)")
      ->take_all();
  cmd->add_option("-o,--output-dir", args.output_dir, "Override run.output_dir");
  cmd->add_option("-j,--workers", args.workers, "Override run.workers")->check(CLI::NonNegativeNumber);
}

RunConfig load(const CommonArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (!args.output_dir.empty()) overrides.push_back("run.output_dir=\"" + args.output_dir + "\"");
  if (args.workers >= 0) overrides.push_back(fmt::format("run.workers={}", args.workers));
  return load_run_config(args.config, overrides);
}

void print_report(const RunReport& report) {
  for (const auto& s : report.stages) {
    std::cout << fmt::format("{:<8} {:<7} {:8.2f}s", to_string(s.stage), s.status, s.seconds);
    if (!s.outputs.empty()) std::cout << fmt::format("  {} output(s)", s.outputs.size());
    std::cout << '\n';
    for (const auto& note : s.notes) std::cout << "         " << note << '\n';
  }
  for (const auto& [stage, n] : report.skip_counts) {
    std::cout << fmt::format("skipped in {}: {}\n", stage, n);
  }
  if (!report.omitted_metrics.empty()) {
    std::cout << "omitted metrics:";
    for (const auto& m : report.omitted_metrics) std::cout << ' ' << m;
    std::cout << '\n';
  }
  if (report.failed_stage) {
    std::cerr << fmt::format("error: {} stage failed ({}): {}\n", to_string(*report.failed_stage),
                             to_string(*report.error_kind), report.error_message);
  } else if (!report.harvest_complete) {
    std::cerr << "error: harvest incomplete; see the skip report\n";
  }
}

int run_stages(const CommonArgs& args, std::optional<std::vector<Stage>> stages) {
  RunConfig config = load(args);
  if (stages) config.stages = *stages;
  RunReport report = run_pipeline(config);
  print_report(report);
  return exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bibliometric indicators for AI conference corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "scholarmetrics 0.3.0");

  CommonArgs args;

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a configuration and exit");
  add_common(validate_cmd, args);
  auto* all_cmd = app.add_subcommand("all", "Run the stages listed in run.stages");
  add_common(all_cmd, args);

  struct StageCommand {
    CLI::App* cmd;
    Stage stage;
  };
  std::vector<StageCommand> stage_cmds;
  for (auto [name, stage, help] :
       {std::tuple{"harvest", Stage::Harvest, "Fetch listings and metadata"},
        std::tuple{"build", Stage::Build, "Assemble the corpus from harvested works"},
        std::tuple{"metrics", Stage::Metrics, "Compute indicators into the metrics cache"},
        std::tuple{"export", Stage::Export, "Write CSV tables from the metrics cache"}}) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, args);
    stage_cmds.push_back({cmd, stage});
  }

  testkit::SynthSpec synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus with known structure");
  synth_cmd->add_option("--out", synth_out, "Corpus file (JSON lines)")->required();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--works-per-cell", synth.works_per_cell,
                        "Target works per subfield and window")
      ->capture_default_str();
  synth_cmd->add_option("--alpha", synth.alpha, "Citation power-law exponent")
      ->capture_default_str();
  synth_cmd->add_option("--industry-probability", synth.industry_probability)
      ->capture_default_str();
  synth_cmd->add_option("--start-year", synth.start_year)->capture_default_str();
  synth_cmd->add_option("--end-year", synth.end_year)->capture_default_str();
  synth_cmd->add_option("--window-width", synth.window_width)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      RunConfig config = load(args);
      validate(config);
      std::cout << "configuration ok: stages";
      for (Stage s : config.stages) std::cout << ' ' << to_string(s);
      std::cout << ", output " << config.output_dir.string() << '\n';
      return 0;
    }
    if (*all_cmd) return run_stages(args, std::nullopt);
    for (const auto& sc : stage_cmds) {
      if (*sc.cmd) return run_stages(args, std::vector<Stage>{sc.stage});
    }
    if (*synth_cmd) {
      Corpus corpus = testkit::generate_corpus(synth);
      const fs::path out = synth_out;
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      save_corpus(out, corpus);
      std::cout << fmt::format("wrote {} works to {}\n", corpus.size(), out.string());
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << fmt::format("error ({}): {}\n", to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
