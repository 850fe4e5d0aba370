#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholarmetrics/authors.hpp"
#include "scholarmetrics/collab.hpp"
#include "scholarmetrics/corpus.hpp"
#include "scholarmetrics/harvest/industry.hpp"

namespace scholarmetrics::metrics {

enum class Statistic { Scalar, Sample };

std::string_view to_string(Statistic s) noexcept;

struct MetricInfo {
  std::string_view id;
  /// 1..12 for the indicator system, 0 for descriptive statistics.
  int indicator = 0;
  std::string_view indicator_name;
  std::string_view dimension;  ///< "impact", "collaboration", "author", "descriptive"
  Statistic statistic = Statistic::Scalar;
  std::string_view description;
};

std::span<const MetricInfo> registry() noexcept;
const MetricInfo* find_metric(std::string_view id) noexcept;
/// Indicator names in indicator order (12 entries).
std::vector<std::string_view> indicator_names();

/// Resolves a toggle that names either a metric id or an indicator name into
/// metric ids. Throws InvalidArgument for unknown names.
std::vector<std::string_view> resolve_selector(std::string_view name);

enum class TopKScope { Global, PerWindow };
enum class MigrationScope { AllAuthors, TopK };

struct MetricsOptions {
  std::vector<Subfield> subfields{kAllSubfields.begin(), kAllSubfields.end()};
  /// Metric ids or indicator names to skip.
  std::set<std::string> disabled;
  std::uint64_t velocity_threshold = 25;
  std::uint64_t high_impact_threshold = 100;
  int top_percent = 20;
  std::size_t clustering_top_k = 1000;
  std::size_t stability_top_k = 3000;
  std::size_t mobility_top_k = 3000;
  TopKScope top_k_scope = TopKScope::Global;
  double js_log_base = authors::kDefaultLogBase;
  std::size_t top_industry_k = 15;
  std::size_t migration_top_n = 15;
  MigrationScope migration_scope = MigrationScope::AllAuthors;
  collab::InactivePolicy stability_policy = collab::InactivePolicy::Exclude;
  int workers = 0;  ///< 0 picks the hardware concurrency
  const harvest::IndustryKeywordList* keywords = nullptr;

  /// Throws InvalidArgument when out of range or a toggle is unknown.
  void validate() const;
};

struct ScalarValue {
  std::string metric_id;
  std::string subfield;
  std::string window;
  double value = 0.0;
};

struct SampleSet {
  std::string metric_id;
  std::string subfield;
  std::string window;
  std::vector<double> values;
};

struct FlowCell {
  std::string window;
  std::string from;
  std::string to;
  double observed = 0.0;
  double expected = 0.0;
  std::optional<double> ratio;
};

struct ChordTable {
  std::string subfield;
  std::string window;
  collab::CountryPairMatrix matrix;
};

struct SankeyRow {
  std::string subfield;
  std::string discipline;
  std::string direction;
  std::uint64_t count = 0;
  double share = 0.0;
};

struct SankeyCoverage {
  std::string subfield;
  std::string direction;
  std::uint64_t links = 0;
};

struct IndustryRow {
  std::string subfield;
  std::size_t rank = 0;
  std::string organization;
  std::uint64_t count = 0;
};

struct EdgeRow {
  std::string author_a;
  std::string author_b;
  std::uint64_t weight = 0;
};

struct NetworkEdges {
  std::string subfield;
  std::string window;
  std::vector<EdgeRow> edges;
};

/// Everything the export stage needs, computed once from a corpus.
struct MetricsBundle {
  std::string corpus_provenance;
  std::vector<std::string> windows;
  std::string full_range;
  std::vector<std::string> enabled_metrics;
  std::vector<std::string> disabled_metrics;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ScalarValue> scalars;
  std::vector<SampleSet> samples;
  std::vector<FlowCell> flows;
  std::vector<ChordTable> chords;
  std::vector<SankeyRow> sankey;
  std::vector<SankeyCoverage> sankey_coverage;
  std::vector<IndustryRow> industry;
  std::vector<authors::MigrationFlow> migration;
  std::vector<NetworkEdges> networks;
  std::vector<YearlyCountRow> yearly;
  /// Cells skipped for lack of data ("metric subfield window: reason").
  std::vector<std::string> notes;

  bool enabled(std::string_view metric_id) const;
};

MetricsBundle compute_metrics(const Corpus& corpus, const MetricsOptions& options);

std::string bundle_to_json(const MetricsBundle& bundle);
MetricsBundle bundle_from_json(std::string_view text);
void save_bundle(const MetricsBundle& bundle, const std::filesystem::path& path);
MetricsBundle load_bundle(const std::filesystem::path& path);

}  // namespace scholarmetrics::metrics
