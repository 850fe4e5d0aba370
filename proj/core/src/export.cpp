#include "scholarmetrics/export.hpp"

#include <algorithm>
#include <set>

#include "scholarmetrics/csv.hpp"
#include "scholarmetrics/error.hpp"

namespace scholarmetrics::exporter {

namespace fs = std::filesystem;

std::string slug(std::string_view label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') out.push_back(c);
  }
  return out;
}

void export_violin_samples(std::span<const metrics::SampleSet> samples, const fs::path& path,
                           const fs::path& coverage_path) {
  std::vector<const metrics::SampleSet*> order;
  for (const auto& s : samples) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::tie(a->metric_id, a->subfield, a->window) <
           std::tie(b->metric_id, b->subfield, b->window);
  });
  CsvWriter out(path, {"metric_id", "subfield", "window", "value"});
  CsvWriter coverage(coverage_path, {"metric_id", "subfield", "window", "n"});
  for (const auto* s : order) {
    std::vector<double> values = s->values;
    std::sort(values.begin(), values.end());
    for (double v : values) out.row({s->metric_id, s->subfield, s->window, format_real(v)});
    coverage.row({s->metric_id, s->subfield, s->window, std::to_string(values.size())});
  }
}

void export_chord_matrix(const collab::CountryPairMatrix& m, const fs::path& path,
                         const fs::path& totals_path) {
  const std::size_t n = m.countries.size();
  if (m.counts.size() != n) throw Error(ErrorKind::InvalidArgument, "chord matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (m.counts[i].size() != n) {
      throw Error(ErrorKind::InvalidArgument, "chord matrix is not square");
    }
    if (m.counts[i][i] != 0) {
      throw Error(ErrorKind::InvalidArgument, "chord matrix has a nonzero diagonal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (m.counts[i][j] != m.counts[j][i]) {
        throw Error(ErrorKind::InvalidArgument, "chord matrix is not symmetric");
      }
    }
  }
  // Rows follow lexicographic country order regardless of the matrix order.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return m.countries[a] < m.countries[b]; });

  CsvWriter out(path, {"country_a", "country_b", "count"});
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      auto c = m.counts[idx[x]][idx[y]];
      if (c > 0) out.row({m.countries[idx[x]], m.countries[idx[y]], std::to_string(c)});
    }
  }
  CsvWriter totals(totals_path, {"country", "total"});
  auto sums = m.totals();
  for (std::size_t x = 0; x < n; ++x) {
    if (sums[idx[x]] > 0) totals.row({m.countries[idx[x]], std::to_string(sums[idx[x]])});
  }
}

void export_sankey_flows(std::span<const metrics::SankeyRow> rows,
                         std::span<const metrics::SankeyCoverage> coverage, const fs::path& path,
                         const fs::path& coverage_path) {
  std::vector<metrics::SankeyRow> sorted(rows.begin(), rows.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.subfield, a.direction, a.discipline) <
           std::tie(b.subfield, b.direction, b.discipline);
  });
  CsvWriter out(path, {"subfield", "external_discipline", "direction", "count", "share"});
  for (const auto& r : sorted) {
    out.row({r.subfield, r.discipline, r.direction, std::to_string(r.count),
             format_real(r.share)});
  }
  std::vector<metrics::SankeyCoverage> cov(coverage.begin(), coverage.end());
  std::stable_sort(cov.begin(), cov.end(), [](const auto& a, const auto& b) {
    return std::tie(a.subfield, a.direction) < std::tie(b.subfield, b.direction);
  });
  CsvWriter note(coverage_path, {"subfield", "direction", "links", "note"});
  for (const auto& c : cov) {
    note.row({c.subfield, c.direction, std::to_string(c.links),
              c.links == 0 ? "no classified neighbors" : ""});
  }
}

std::size_t export_metric_table(const metrics::MetricsBundle& bundle, std::string_view metric_id,
                                const fs::path& path) {
  const auto* info = metrics::find_metric(metric_id);
  if (!info) throw Error(ErrorKind::InvalidArgument, "unknown metric_id: " + std::string(metric_id));
  CsvWriter out(path, {"metric_id", "subfield", "window", "statistic", "value", "sample_ref"});
  const std::string stat(metrics::to_string(info->statistic));
  if (info->statistic == metrics::Statistic::Scalar) {
    std::vector<const metrics::ScalarValue*> rows;
    for (const auto& s : bundle.scalars) {
      if (s.metric_id == metric_id) rows.push_back(&s);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
      return std::tie(a->subfield, a->window) < std::tie(b->subfield, b->window);
    });
    for (const auto* s : rows) {
      out.row({s->metric_id, s->subfield, s->window, stat, format_real(s->value), ""});
    }
  } else {
    std::vector<const metrics::SampleSet*> rows;
    for (const auto& s : bundle.samples) {
      if (s.metric_id == metric_id && !s.values.empty()) rows.push_back(&s);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
      return std::tie(a->subfield, a->window) < std::tie(b->subfield, b->window);
    });
    for (const auto* s : rows) {
      out.row({s->metric_id, s->subfield, s->window, stat, "", "violin_samples.csv"});
    }
  }
  return out.rows_written();
}

void export_flow_matrix(std::span<const metrics::FlowCell> flows, const fs::path& path) {
  CsvWriter out(path, {"window", "from", "to", "observed", "expected", "ratio", "defined"});
  for (const auto& f : flows) {
    out.row({f.window, f.from, f.to, format_real(f.observed), format_real(f.expected),
             f.ratio ? format_real(*f.ratio) : "", f.ratio ? "true" : "false"});
  }
}

void export_migration_flows(std::span<const authors::MigrationFlow> flows, const fs::path& path) {
  CsvWriter out(path, {"from", "to", "count", "net"});
  for (const auto& f : flows) {
    out.row({f.from_discipline, f.to_discipline, std::to_string(f.count), std::to_string(f.net)});
  }
}

void export_industry(std::span<const metrics::IndustryRow> rows, const fs::path& path) {
  CsvWriter out(path, {"subfield", "rank", "organization", "count"});
  for (const auto& r : rows) {
    out.row({r.subfield, std::to_string(r.rank), r.organization, std::to_string(r.count)});
  }
}

void export_edge_list(const metrics::NetworkEdges& network, const fs::path& path) {
  CsvWriter out(path, {"author_a", "author_b", "weight"});
  for (const auto& e : network.edges) {
    out.row({e.author_a, e.author_b, std::to_string(e.weight)});
  }
}

void export_yearly_counts(std::span<const YearlyCountRow> rows, const fs::path& path) {
  CsvWriter out(path,
                {"year", "subfield", "n_papers", "n_distinct_authors", "n_citations_received"});
  for (const auto& r : rows) {
    out.row({std::to_string(r.year), std::string(to_string(r.subfield)), std::to_string(r.n_papers),
             std::to_string(r.n_distinct_authors), std::to_string(r.n_citations_received)});
  }
}

void export_registry(const fs::path& path) {
  CsvWriter out(path, {"metric_id", "indicator", "indicator_name", "dimension", "statistic",
                       "description"});
  for (const auto& m : metrics::registry()) {
    out.row({std::string(m.id), std::to_string(m.indicator), std::string(m.indicator_name),
             std::string(m.dimension), std::string(metrics::to_string(m.statistic)),
             std::string(m.description)});
  }
}

ExportSummary export_all(const metrics::MetricsBundle& bundle, const fs::path& directory,
                         const std::optional<std::vector<std::string>>& selection) {
  std::vector<std::string> tables;
  if (selection) {
    for (const auto& id : *selection) {
      if (!metrics::find_metric(id)) {
        throw Error(ErrorKind::InvalidArgument, "unknown metric_id: " + id);
      }
      if (bundle.enabled(id)) tables.push_back(id);
    }
  } else {
    tables = bundle.enabled_metrics;
  }

  fs::remove_all(directory);
  fs::create_directories(directory);

  ExportSummary summary;
  for (const auto& m : metrics::registry()) {
    if (std::find(tables.begin(), tables.end(), m.id) == tables.end()) {
      summary.omitted_metrics.emplace_back(m.id);
    }
  }

  export_registry(directory / "metric_registry.csv");
  for (const auto& id : tables) {
    export_metric_table(bundle, id, directory / "metrics" / (id + ".csv"));
  }
  export_violin_samples(bundle.samples, directory / "violin_samples.csv",
                        directory / "violin_coverage.csv");
  if (bundle.enabled("intl_simple_ratio") || bundle.enabled("intl_pair_ratio_mean")) {
    for (const auto& c : bundle.chords) {
      const std::string stem = slug(c.subfield) + "_" + c.window;
      export_chord_matrix(c.matrix, directory / "chords" / (stem + ".csv"),
                          directory / "chords" / (stem + ".totals.csv"));
    }
  }
  if (bundle.enabled("entropy_cited") || bundle.enabled("entropy_citing")) {
    export_sankey_flows(bundle.sankey, bundle.sankey_coverage, directory / "sankey_flows.csv",
                        directory / "sankey_coverage.csv");
  }
  if (bundle.enabled("oe_self_ratio")) export_flow_matrix(bundle.flows, directory / "oe_matrix.csv");
  if (bundle.enabled("industry_rate")) {
    export_industry(bundle.industry, directory / "top_industry_collaborators.csv");
  }
  if (bundle.enabled("topic_mobility")) {
    export_migration_flows(bundle.migration, directory / "migration_flows.csv");
  }
  for (const auto& n : bundle.networks) {
    export_edge_list(n, directory / "networks" / (slug(n.subfield) + "_" + n.window + ".csv"));
  }
  export_yearly_counts(bundle.yearly, directory / "yearly_counts.csv");

  for (const auto& entry : fs::recursive_directory_iterator(directory)) {
    if (entry.is_regular_file()) summary.files.push_back(fs::relative(entry.path(), directory));
  }
  std::sort(summary.files.begin(), summary.files.end());
  return summary;
}

}  // namespace scholarmetrics::exporter
