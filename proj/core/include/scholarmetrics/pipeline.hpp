#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scholarmetrics/config.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/harvest/harvest.hpp"
#include "scholarmetrics/metrics.hpp"

namespace scholarmetrics {

enum class Stage { Harvest, Build, Metrics, Export };

std::string_view to_string(Stage s) noexcept;
std::optional<Stage> parse_stage(std::string_view text);

inline constexpr std::string_view kContactEmailEnv = "SCHOLARMETRICS_CONTACT_EMAIL";

struct RunConfig {
  std::vector<Stage> stages{Stage::Harvest, Stage::Build, Stage::Metrics, Stage::Export};
  std::filesystem::path output_dir = "out";

  harvest::HarvestOptions harvest;
  std::filesystem::path keyword_file;
  /// Response cache directory; defaults to `<output_dir>/cache/http`.
  std::optional<std::filesystem::path> http_cache_dir;

  /// Works file read by the build stage; defaults to the harvest output.
  std::optional<std::filesystem::path> build_input;
  int window_start = 2000;
  int window_end = 2024;
  int window_width = 5;

  metrics::MetricsOptions metrics;
  /// Metric tables to export; all enabled metrics when unset.
  std::optional<std::vector<std::string>> export_metrics;

  std::filesystem::path harvest_works() const { return output_dir / "harvest" / "works.jsonl"; }
  std::filesystem::path skip_report() const { return output_dir / "harvest" / "skip_report.csv"; }
  std::filesystem::path corpus_path() const { return output_dir / "corpus" / "corpus.jsonl"; }
  std::filesystem::path build_skips() const { return output_dir / "corpus" / "build_skips.csv"; }
  std::filesystem::path metrics_cache() const { return output_dir / "cache" / "metrics.json"; }
  std::filesystem::path export_dir() const { return output_dir / "exports"; }
  std::filesystem::path run_report() const { return output_dir / "run_report.json"; }
  std::filesystem::path http_cache() const {
    return http_cache_dir.value_or(output_dir / "cache" / "http");
  }
  std::filesystem::path build_source() const { return build_input.value_or(harvest_works()); }
};

/// Built-in keyword list location (source tree or install prefix).
std::filesystem::path default_keyword_file();

/// Reads a config document. Relative paths resolve against `base_dir`.
/// `overrides` are `table.key=value` assignments applied before reading.
/// `contact_email_env` fills harvest.contact_email when the document leaves it unset.
RunConfig run_config_from_text(std::string_view text, const std::filesystem::path& base_dir,
                               const std::vector<std::string>& overrides = {},
                               std::optional<std::string> contact_email_env = std::nullopt);

/// Reads the file, applies overrides, and consults SCHOLARMETRICS_CONTACT_EMAIL.
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

/// Checks ranges and that referenced inputs exist. Throws ConfigError.
void validate(const RunConfig& config);

struct StageReport {
  Stage stage = Stage::Build;
  std::string status;  ///< "ok", "partial", "failed"
  double seconds = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::string> notes;
};

struct RunReport {
  std::vector<StageReport> stages;
  std::optional<Stage> failed_stage;
  std::optional<ErrorKind> error_kind;
  std::string error_message;
  bool harvest_complete = true;
  std::map<std::string, std::size_t> skip_counts;  ///< by stage
  std::map<std::string, std::string> provenance;   ///< hashes and parameters
  std::vector<std::string> omitted_metrics;

  bool ok() const { return !failed_stage && harvest_complete; }
};

/// Exit status for a failure kind: 2 config, 3 network, 4 data.
int exit_code_for(ErrorKind kind) noexcept;
/// 0 on success, exit_code_for the error, 4 for an incomplete harvest.
int exit_code(const RunReport& report) noexcept;

/// Runs the configured stages in order, stopping at the first failure. The
/// report is also written to `<output_dir>/run_report.json`. A null transport
/// uses HTTP.
RunReport run_pipeline(const RunConfig& config, harvest::Transport* transport = nullptr);

std::string run_report_json(const RunReport& report);

}  // namespace scholarmetrics
