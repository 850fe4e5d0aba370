#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scholarmetrics/collab.hpp"
#include "scholarmetrics/metrics.hpp"

namespace scholarmetrics::exporter {

/// Column layouts; bumped whenever a header changes.
inline constexpr int kSchemaVersion = 1;

/// File-name form of a subfield label ("Web&IR" -> "WebIR").
std::string slug(std::string_view label);

/// Long-format samples sorted by (metric_id, subfield, window, value), plus a
/// coverage sidecar listing every cell with its sample count (zero included).
void export_violin_samples(std::span<const metrics::SampleSet> samples,
                           const std::filesystem::path& path,
                           const std::filesystem::path& coverage_path);

/// Rows (country_a, country_b, count) with country_a < country_b, plus a
/// totals sidecar (country, total). Throws InvalidArgument when the matrix is
/// not symmetric with a zero diagonal.
void export_chord_matrix(const collab::CountryPairMatrix& matrix,
                         const std::filesystem::path& path,
                         const std::filesystem::path& totals_path);

void export_sankey_flows(std::span<const metrics::SankeyRow> rows,
                         std::span<const metrics::SankeyCoverage> coverage,
                         const std::filesystem::path& path,
                         const std::filesystem::path& coverage_path);

/// One table for `metric_id` with columns
/// metric_id,subfield,window,statistic,value,sample_ref.
/// Throws InvalidArgument for ids outside the registry.
std::size_t export_metric_table(const metrics::MetricsBundle& bundle, std::string_view metric_id,
                                const std::filesystem::path& path);

void export_flow_matrix(std::span<const metrics::FlowCell> flows,
                        const std::filesystem::path& path);
void export_migration_flows(std::span<const authors::MigrationFlow> flows,
                            const std::filesystem::path& path);
void export_industry(std::span<const metrics::IndustryRow> rows,
                     const std::filesystem::path& path);
void export_edge_list(const metrics::NetworkEdges& network, const std::filesystem::path& path);
void export_yearly_counts(std::span<const YearlyCountRow> rows,
                          const std::filesystem::path& path);
void export_registry(const std::filesystem::path& path);

struct ExportSummary {
  std::vector<std::filesystem::path> files;  ///< relative to the export directory, sorted
  std::vector<std::string> omitted_metrics;
};

/// Writes every export for the bundle into `directory`, replacing whatever was
/// there. `selection` limits the metric tables (all enabled metrics otherwise).
ExportSummary export_all(const metrics::MetricsBundle& bundle,
                         const std::filesystem::path& directory,
                         const std::optional<std::vector<std::string>>& selection = std::nullopt);

}  // namespace scholarmetrics::exporter
