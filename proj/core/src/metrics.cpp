#include "scholarmetrics/metrics.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "scholarmetrics/csv.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/harvest/openalex.hpp"
#include "scholarmetrics/impact.hpp"

namespace scholarmetrics::metrics {

namespace {

using S = Statistic;

constexpr std::array kRegistry = {
    MetricInfo{"n_papers", 0, "descriptive", "descriptive", S::Scalar, "target works in the cell"},
    MetricInfo{"n_authors", 0, "descriptive", "descriptive", S::Scalar,
               "distinct authors of target works in the cell"},
    MetricInfo{"h_index", 1, "academic_impact", "impact", S::Scalar,
               "h-index over the cell's citation counts"},
    MetricInfo{"citation_counts", 2, "citation_distribution", "impact", S::Sample,
               "citation count per target work"},
    MetricInfo{"powerlaw_alpha", 2, "citation_distribution", "impact", S::Scalar,
               "rank-frequency exponent"},
    MetricInfo{"powerlaw_c", 2, "citation_distribution", "impact", S::Scalar,
               "rank-frequency scale"},
    MetricInfo{"powerlaw_r2", 2, "citation_distribution", "impact", S::Scalar,
               "goodness of fit in log space"},
    MetricInfo{"days_to_threshold", 3, "citation_velocity", "impact", S::Sample,
               "days to the velocity threshold, all works reaching it"},
    MetricInfo{"days_to_high_threshold_top", 3, "citation_velocity", "impact", S::Sample,
               "days to the high-impact threshold, top-cited cohort"},
    MetricInfo{"velocity_median", 3, "citation_velocity", "impact", S::Scalar,
               "threshold * 365.25 / median days"},
    MetricInfo{"velocity_high_median", 3, "citation_velocity", "impact", S::Scalar,
               "high threshold * 365.25 / median days of the top cohort"},
    MetricInfo{"entropy_cited", 4, "interdisciplinarity", "impact", S::Sample,
               "discipline entropy of each work's references"},
    MetricInfo{"entropy_citing", 4, "interdisciplinarity", "impact", S::Sample,
               "discipline entropy of each work's citing works"},
    MetricInfo{"entropy_cited_mean", 4, "interdisciplinarity", "impact", S::Scalar,
               "mean reference entropy"},
    MetricInfo{"entropy_citing_mean", 4, "interdisciplinarity", "impact", S::Scalar,
               "mean citer entropy"},
    MetricInfo{"oe_self_ratio", 5, "observed_expected_ratio", "impact", S::Scalar,
               "observed/expected within-subfield citation ratio"},
    MetricInfo{"collaboration_index", 6, "collaboration_index", "collaboration", S::Scalar,
               "mean authors per paper"},
    MetricInfo{"intl_simple_ratio", 7, "international_collaboration", "collaboration", S::Scalar,
               "share of works with two or more countries"},
    MetricInfo{"intl_pair_ratio_mean", 7, "international_collaboration", "collaboration",
               S::Scalar, "mean cross-country author pair share"},
    MetricInfo{"industry_rate", 8, "industry_collaboration", "collaboration", S::Scalar,
               "share of works with an industry author"},
    MetricInfo{"weighted_clustering", 9, "collaboration_intensity", "collaboration", S::Scalar,
               "mean weighted clustering of the top-author network"},
    MetricInfo{"jaccard_stability", 10, "collaboration_stability", "collaboration", S::Scalar,
               "mean collaborator-set Jaccard overlap across adjacent windows"},
    MetricInfo{"author_h_index", 11, "author_impact", "author", S::Sample,
               "h-index of each top author"},
    MetricInfo{"topic_mobility", 12, "topic_mobility", "author", S::Scalar,
               "mean author topic mobility"},
    MetricInfo{"author_mobility", 12, "topic_mobility", "author", S::Sample,
               "topic mobility of each top author with a defined value"},
};

std::string subfield_name(Subfield s) { return std::string(to_string(s)); }

struct Partial {
  std::vector<ScalarValue> scalars;
  std::vector<SampleSet> samples;
  std::vector<ChordTable> chords;
  std::vector<SankeyRow> sankey;
  std::vector<SankeyCoverage> sankey_coverage;
  std::vector<IndustryRow> industry;
  std::vector<NetworkEdges> networks;
  std::vector<std::string> notes;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class CellWriter {
 public:
  CellWriter(const MetricsBundle& bundle, Partial& out, std::string subfield, std::string window)
      : bundle_(bundle), out_(out), subfield_(std::move(subfield)), window_(std::move(window)) {}

  bool on(std::string_view id) const { return bundle_.enabled(id); }

  void scalar(std::string_view id, double v) {
    if (on(id)) out_.scalars.push_back({std::string(id), subfield_, window_, v});
  }
  void sample(std::string_view id, std::vector<double> values) {
    if (on(id)) out_.samples.push_back({std::string(id), subfield_, window_, std::move(values)});
  }
  void note(std::string_view id, std::string_view reason) {
    if (on(id)) out_.notes.push_back(fmt::format("{} {} {}: {}", id, subfield_, window_, reason));
  }

 private:
  const MetricsBundle& bundle_;
  Partial& out_;
  std::string subfield_;
  std::string window_;
};

void compute_cell(const Corpus& corpus, const MetricsOptions& opt, const MetricsBundle& bundle,
                  Subfield subfield, const TimeWindow& window,
                  std::span<const std::string> clustering_authors, Partial& out) {
  CellWriter cell(bundle, out, subfield_name(subfield), window.label());
  const auto scope = corpus.targets(subfield, window);

  cell.scalar("n_papers", static_cast<double>(scope.size()));
  {
    std::unordered_set<std::string_view> ids;
    for (const auto* w : scope)
      for (const auto& a : w->authorships) ids.insert(a.author_id);
    cell.scalar("n_authors", static_cast<double>(ids.size()));
  }

  // Country pairs are exported even for empty cells (header-only chord file).
  if (bundle.enabled("intl_simple_ratio") || bundle.enabled("intl_pair_ratio_mean")) {
    out.chords.push_back({subfield_name(subfield), window.label(),
                          collab::country_pair_matrix(scope)});
  }

  if (scope.empty()) {
    for (const auto& m : kRegistry) {
      if (m.indicator < 1 || m.indicator > 9 || m.indicator == 5) continue;
      if (m.statistic == Statistic::Sample) {
        cell.sample(m.id, {});
      } else {
        cell.note(m.id, "no works");
      }
    }
    return;
  }

  std::vector<std::uint64_t> counts;
  counts.reserve(scope.size());
  for (const auto* w : scope) counts.push_back(w->citation_count);
  cell.scalar("h_index", static_cast<double>(impact::h_index(counts)));
  cell.sample("citation_counts", std::vector<double>(counts.begin(), counts.end()));

  if (cell.on("powerlaw_alpha") || cell.on("powerlaw_c") || cell.on("powerlaw_r2")) {
    try {
      auto fit = impact::fit_power_law(std::span<const std::uint64_t>(counts));
      cell.scalar("powerlaw_alpha", fit.alpha);
      cell.scalar("powerlaw_c", fit.C);
      if (fit.r2) {
        cell.scalar("powerlaw_r2", *fit.r2);
      } else {
        cell.note("powerlaw_r2", "undefined (constant counts)");
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
      cell.note("powerlaw_alpha", e.what());
      cell.note("powerlaw_c", e.what());
      cell.note("powerlaw_r2", e.what());
    }
  }

  auto to_real = [](const std::vector<std::int64_t>& days) {
    return std::vector<double>(days.begin(), days.end());
  };
  {
    auto days = to_real(impact::velocity_distribution(corpus, window, subfield,
                                                      opt.velocity_threshold,
                                                      impact::Cohort::AllReachingN));
    if (!days.empty()) {
      cell.scalar("velocity_median", static_cast<double>(opt.velocity_threshold) *
                                         impact::kDaysPerYear / median(days));
    } else {
      cell.note("velocity_median", "no work reaches the threshold");
    }
    cell.sample("days_to_threshold", std::move(days));
  }
  {
    auto days = to_real(impact::velocity_distribution(corpus, window, subfield,
                                                      opt.high_impact_threshold,
                                                      impact::Cohort::TopCited, opt.top_percent));
    if (!days.empty()) {
      cell.scalar("velocity_high_median", static_cast<double>(opt.high_impact_threshold) *
                                              impact::kDaysPerYear / median(days));
    } else {
      cell.note("velocity_high_median", "no top-cohort work reaches the threshold");
    }
    cell.sample("days_to_high_threshold_top", std::move(days));
  }

  for (auto dir : {impact::Direction::Cited, impact::Direction::Citing}) {
    const std::string sample_id = fmt::format("entropy_{}", impact::to_string(dir));
    const std::string mean_id = sample_id + "_mean";
    if (!cell.on(sample_id) && !cell.on(mean_id)) continue;
    std::vector<double> values;
    for (const auto* w : scope) {
      if (auto h = impact::work_interdisciplinarity(*w, corpus, dir)) values.push_back(*h);
    }
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      cell.scalar(mean_id, sum / static_cast<double>(values.size()));
    } else {
      cell.note(mean_id, "no classified neighbors");
    }
    cell.sample(sample_id, std::move(values));
  }

  cell.scalar("collaboration_index", collab::collaboration_index(scope));
  if (cell.on("intl_simple_ratio") || cell.on("intl_pair_ratio_mean")) {
    auto r = collab::international_rates(corpus, window, subfield);
    cell.scalar("intl_simple_ratio", r.simple_ratio);
    if (r.n_pair_defined > 0) {
      cell.scalar("intl_pair_ratio_mean", r.pair_ratio_mean);
    } else {
      cell.note("intl_pair_ratio_mean", "no work with two known-country authors");
    }
  }
  cell.scalar("industry_rate", collab::industry_rate(corpus, window, subfield));

  if (cell.on("weighted_clustering")) {
    auto net = collab::build_coauthor_network(corpus, subfield, window, clustering_authors);
    if (net.nodes().empty()) {
      cell.note("weighted_clustering", "no selected author active");
    } else {
      cell.scalar("weighted_clustering", collab::weighted_clustering(net).global);
      NetworkEdges edges{subfield_name(subfield), window.label(), {}};
      edges.edges.reserve(net.edges().size());
      for (const auto& e : net.edges()) {
        edges.edges.push_back({net.nodes()[e.a], net.nodes()[e.b], e.weight});
      }
      out.networks.push_back(std::move(edges));
    }
  }
}

void compute_sankey(const Corpus& corpus, Subfield subfield, Partial& out) {
  for (auto dir : {impact::Direction::Cited, impact::Direction::Citing}) {
    std::map<std::string, std::uint64_t> totals;
    for (const auto* w : corpus.targets(subfield, std::nullopt)) {
      for (const auto& [d, c] : impact::neighbor_disciplines(*w, corpus, dir)) totals[d] += c;
    }
    std::uint64_t links = 0;
    for (const auto& [_, c] : totals) links += c;
    out.sankey_coverage.push_back(
        {subfield_name(subfield), std::string(impact::to_string(dir)), links});
    for (const auto& [d, c] : totals) {
      out.sankey.push_back({subfield_name(subfield), d, std::string(impact::to_string(dir)), c,
                            static_cast<double>(c) / static_cast<double>(links)});
    }
  }
}

void compute_subfield(const Corpus& corpus, const MetricsOptions& opt,
                      const MetricsBundle& bundle, Subfield subfield, Partial& out) {
  const auto windows = corpus.windows();
  const std::string name = subfield_name(subfield);

  std::vector<std::string> global_top;
  if (bundle.enabled("weighted_clustering") && opt.top_k_scope == TopKScope::Global) {
    global_top = collab::select_top_authors(corpus, subfield, opt.clustering_top_k);
  }
  for (const auto& w : windows) {
    if (bundle.enabled("weighted_clustering") && opt.top_k_scope == TopKScope::PerWindow) {
      auto local = collab::select_top_authors(corpus, subfield, opt.clustering_top_k, w);
      compute_cell(corpus, opt, bundle, subfield, w, local, out);
    } else {
      compute_cell(corpus, opt, bundle, subfield, w, global_top, out);
    }
  }

  CellWriter whole(bundle, out, name, bundle.full_range);

  if (bundle.enabled("jaccard_stability")) {
    auto selected = collab::select_top_authors(corpus, subfield, opt.stability_top_k);
    for (std::size_t t = 0; t + 1 < windows.size(); ++t) {
      CellWriter pair(bundle, out, name, windows[t].label() + "|" + windows[t + 1].label());
      try {
        auto r = collab::jaccard_stability(corpus, windows[t], windows[t + 1], selected, subfield,
                                           opt.stability_policy);
        pair.scalar("jaccard_stability", r.value);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        pair.note("jaccard_stability", e.what());
      }
    }
  }

  if (bundle.enabled("author_h_index")) {
    std::vector<double> hs;
    for (const auto& id : collab::select_top_authors(corpus, subfield, opt.mobility_top_k)) {
      hs.push_back(static_cast<double>(authors::author_h_index(corpus, id)));
    }
    whole.sample("author_h_index", std::move(hs));
  }

  if (bundle.enabled("topic_mobility") || bundle.enabled("author_mobility")) {
    try {
      auto fm = authors::field_mobility(corpus, subfield, opt.mobility_top_k, windows,
                                        opt.js_log_base);
      whole.scalar("topic_mobility", fm.mean);
      whole.sample("author_mobility", std::move(fm.per_author));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
      whole.note("topic_mobility", e.what());
      whole.sample("author_mobility", {});
    }
  }

  if (bundle.enabled("entropy_cited") || bundle.enabled("entropy_citing")) {
    compute_sankey(corpus, subfield, out);
  }

  if (bundle.enabled("industry_rate")) {
    auto top = collab::top_industry_collaborators(corpus, subfield, opt.top_industry_k,
                                                  opt.keywords);
    for (std::size_t i = 0; i < top.size(); ++i) {
      out.industry.push_back({name, i + 1, top[i].organization, top[i].count});
    }
  }
}

template <class T, class Key>
void sort_by(std::vector<T>& v, Key key) {
  std::stable_sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
}

}  // namespace

std::string_view to_string(Statistic s) noexcept {
  return s == Statistic::Scalar ? "scalar" : "sample";
}

std::span<const MetricInfo> registry() noexcept { return kRegistry; }

const MetricInfo* find_metric(std::string_view id) noexcept {
  for (const auto& m : kRegistry) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

std::vector<std::string_view> indicator_names() {
  std::vector<std::string_view> names(12);
  for (const auto& m : kRegistry) {
    if (m.indicator >= 1) names[static_cast<std::size_t>(m.indicator - 1)] = m.indicator_name;
  }
  return names;
}

std::vector<std::string_view> resolve_selector(std::string_view name) {
  std::vector<std::string_view> out;
  if (const auto* m = find_metric(name)) {
    out.push_back(m->id);
    return out;
  }
  for (const auto& m : kRegistry) {
    if (m.indicator_name == name) out.push_back(m.id);
  }
  if (out.empty()) {
    throw Error(ErrorKind::InvalidArgument, "unknown metric or indicator: " + std::string(name));
  }
  return out;
}

void MetricsOptions::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (subfields.empty()) fail("at least one subfield must be selected");
  if (velocity_threshold < 1 || high_impact_threshold < 1) fail("thresholds must be >= 1");
  if (top_percent < 1 || top_percent > 100) fail("top_percent must be within [1, 100]");
  if (clustering_top_k < 1 || stability_top_k < 1 || mobility_top_k < 1) {
    fail("top-k values must be >= 1");
  }
  if (!(js_log_base > 1.0)) fail("js_log_base must be > 1");
  if (top_industry_k < 1 || migration_top_n < 1) fail("list sizes must be >= 1");
  if (workers < 0) fail("workers must be >= 0");
  for (const auto& d : disabled) resolve_selector(d);
}

bool MetricsBundle::enabled(std::string_view metric_id) const {
  return std::find(enabled_metrics.begin(), enabled_metrics.end(), metric_id) !=
         enabled_metrics.end();
}

MetricsBundle compute_metrics(const Corpus& corpus, const MetricsOptions& opt) {
  opt.validate();
  if (corpus.windows().empty()) {
    throw Error(ErrorKind::PreconditionError, "corpus has no time windows");
  }
  MetricsBundle bundle;
  bundle.corpus_provenance = corpus.provenance();
  for (const auto& w : corpus.windows()) bundle.windows.push_back(w.label());
  bundle.full_range = TimeWindow{corpus.windows().front().start_year,
                                 corpus.windows().back().end_year}
                          .label();

  std::set<std::string_view> off;
  for (const auto& d : opt.disabled) {
    for (auto id : resolve_selector(d)) off.insert(id);
  }
  for (const auto& m : kRegistry) {
    (off.contains(m.id) ? bundle.disabled_metrics : bundle.enabled_metrics)
        .emplace_back(m.id);
  }

  auto& p = bundle.parameters;
  p.emplace_back("velocity_threshold", std::to_string(opt.velocity_threshold));
  p.emplace_back("high_impact_threshold", std::to_string(opt.high_impact_threshold));
  p.emplace_back("top_percent", std::to_string(opt.top_percent));
  p.emplace_back("clustering_top_k", std::to_string(opt.clustering_top_k));
  p.emplace_back("stability_top_k", std::to_string(opt.stability_top_k));
  p.emplace_back("mobility_top_k", std::to_string(opt.mobility_top_k));
  p.emplace_back("top_k_scope", opt.top_k_scope == TopKScope::Global ? "global" : "per_window");
  p.emplace_back("js_log_base", format_real(opt.js_log_base));
  p.emplace_back("top_industry_k", std::to_string(opt.top_industry_k));
  p.emplace_back("migration_top_n", std::to_string(opt.migration_top_n));
  p.emplace_back("migration_scope",
                 opt.migration_scope == MigrationScope::AllAuthors ? "all" : "top_k");
  p.emplace_back("stability_inactive",
                 opt.stability_policy == collab::InactivePolicy::Exclude ? "exclude" : "zero");
  p.emplace_back("keyword_list_hash", opt.keywords ? opt.keywords->hash() : "");

  std::vector<Partial> parts(opt.subfields.size());
  int workers = opt.workers > 0 ? opt.workers
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  harvest::parallel_for(parts.size(), workers, [&](std::size_t i) {
    compute_subfield(corpus, opt, bundle, opt.subfields[i], parts[i]);
  });

  for (auto& part : parts) {
    auto move_into = [](auto& dst, auto& src) {
      dst.insert(dst.end(), std::make_move_iterator(src.begin()),
                 std::make_move_iterator(src.end()));
    };
    move_into(bundle.scalars, part.scalars);
    move_into(bundle.samples, part.samples);
    move_into(bundle.chords, part.chords);
    move_into(bundle.sankey, part.sankey);
    move_into(bundle.sankey_coverage, part.sankey_coverage);
    move_into(bundle.industry, part.industry);
    move_into(bundle.networks, part.networks);
    move_into(bundle.notes, part.notes);
  }

  // Citation flows: per window plus the full range.
  if (bundle.enabled("oe_self_ratio")) {
    std::vector<std::optional<TimeWindow>> scopes(corpus.windows().begin(), corpus.windows().end());
    scopes.push_back(std::nullopt);
    for (const auto& scope : scopes) {
      const std::string label = scope ? scope->label() : bundle.full_range;
      try {
        auto m = impact::observed_expected_matrix(corpus, scope, opt.subfields);
        for (std::size_t i = 0; i < m.subfields.size(); ++i) {
          for (std::size_t j = 0; j < m.subfields.size(); ++j) {
            bundle.flows.push_back({label, subfield_name(m.subfields[i]),
                                    subfield_name(m.subfields[j]), m.observed[i][j],
                                    m.expected[i][j], m.ratio[i][j]});
          }
          if (m.ratio[i][i]) {
            bundle.scalars.push_back(
                {"oe_self_ratio", subfield_name(m.subfields[i]), label, *m.ratio[i][i]});
          } else {
            bundle.notes.push_back(fmt::format("oe_self_ratio {} {}: expected count is zero",
                                               subfield_name(m.subfields[i]), label));
          }
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        bundle.notes.push_back(fmt::format("oe_self_ratio all {}: {}", label, e.what()));
      }
    }
  }

  if (bundle.enabled("topic_mobility")) {
    if (opt.migration_scope == MigrationScope::AllAuthors) {
      bundle.migration = authors::migration_flows(corpus, corpus.windows(), opt.migration_top_n);
    } else {
      std::set<std::string> scope;
      for (Subfield s : opt.subfields) {
        for (auto& id : collab::select_top_authors(corpus, s, opt.mobility_top_k)) {
          scope.insert(std::move(id));
        }
      }
      std::vector<std::string> ids(scope.begin(), scope.end());
      bundle.migration = authors::migration_flows(corpus, corpus.windows(), opt.migration_top_n,
                                                  std::span<const std::string>(ids));
    }
  }

  bundle.yearly = yearly_counts(corpus);

  sort_by(bundle.scalars, [](const ScalarValue& s) {
    return std::tie(s.metric_id, s.subfield, s.window);
  });
  sort_by(bundle.samples, [](const SampleSet& s) {
    return std::tie(s.metric_id, s.subfield, s.window);
  });
  for (auto& s : bundle.samples) std::sort(s.values.begin(), s.values.end());
  std::sort(bundle.notes.begin(), bundle.notes.end());
  return bundle;
}

// ---------------------------------------------------------------------------
// JSON cache
// ---------------------------------------------------------------------------

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kBundleFormat = "scholarmetrics-metrics";
constexpr int kBundleVersion = 1;

json opt_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(key, "metrics cache is missing a field");
  return j.at(key).get<T>();
}

}  // namespace

std::string bundle_to_json(const MetricsBundle& b) {
  json j;
  j["format"] = kBundleFormat;
  j["version"] = kBundleVersion;
  j["corpus_provenance"] = b.corpus_provenance;
  j["windows"] = b.windows;
  j["full_range"] = b.full_range;
  j["enabled_metrics"] = b.enabled_metrics;
  j["disabled_metrics"] = b.disabled_metrics;
  json params = json::array();
  for (const auto& [k, v] : b.parameters) params.push_back({k, v});
  j["parameters"] = params;

  json scalars = json::array();
  for (const auto& s : b.scalars) scalars.push_back({s.metric_id, s.subfield, s.window, s.value});
  j["scalars"] = scalars;

  json samples = json::array();
  for (const auto& s : b.samples) samples.push_back({s.metric_id, s.subfield, s.window, s.values});
  j["samples"] = samples;

  json flows = json::array();
  for (const auto& f : b.flows) {
    flows.push_back({f.window, f.from, f.to, f.observed, f.expected, opt_real(f.ratio)});
  }
  j["flows"] = flows;

  json chords = json::array();
  for (const auto& c : b.chords) {
    chords.push_back({{"subfield", c.subfield},
                      {"window", c.window},
                      {"countries", c.matrix.countries},
                      {"counts", c.matrix.counts}});
  }
  j["chords"] = chords;

  json sankey = json::array();
  for (const auto& s : b.sankey) {
    sankey.push_back({s.subfield, s.discipline, s.direction, s.count, s.share});
  }
  j["sankey"] = sankey;
  json coverage = json::array();
  for (const auto& s : b.sankey_coverage) coverage.push_back({s.subfield, s.direction, s.links});
  j["sankey_coverage"] = coverage;

  json industry = json::array();
  for (const auto& r : b.industry) industry.push_back({r.subfield, r.rank, r.organization, r.count});
  j["industry"] = industry;

  json migration = json::array();
  for (const auto& m : b.migration) {
    migration.push_back({m.from_discipline, m.to_discipline, m.count, m.net});
  }
  j["migration"] = migration;

  json networks = json::array();
  for (const auto& n : b.networks) {
    json edges = json::array();
    for (const auto& e : n.edges) edges.push_back({e.author_a, e.author_b, e.weight});
    networks.push_back({{"subfield", n.subfield}, {"window", n.window}, {"edges", edges}});
  }
  j["networks"] = networks;

  json yearly = json::array();
  for (const auto& y : b.yearly) {
    yearly.push_back({y.year, std::string(to_string(y.subfield)), y.n_papers,
                      y.n_distinct_authors, y.n_citations_received});
  }
  j["yearly"] = yearly;
  j["notes"] = b.notes;
  return j.dump(1) + "\n";
}

MetricsBundle bundle_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, std::string("metrics cache: ") + e.what());
  }
  try {
    if (field<std::string>(j, "format") != kBundleFormat) {
      throw SchemaError("format", "not a metrics cache");
    }
    if (field<int>(j, "version") != kBundleVersion) {
      throw SchemaError("version", "unsupported metrics cache version");
    }
    MetricsBundle b;
    b.corpus_provenance = field<std::string>(j, "corpus_provenance");
    b.windows = field<std::vector<std::string>>(j, "windows");
    b.full_range = field<std::string>(j, "full_range");
    b.enabled_metrics = field<std::vector<std::string>>(j, "enabled_metrics");
    b.disabled_metrics = field<std::vector<std::string>>(j, "disabled_metrics");
    for (const auto& p : j.at("parameters")) b.parameters.emplace_back(p.at(0), p.at(1));
    for (const auto& s : j.at("scalars")) {
      b.scalars.push_back({s.at(0), s.at(1), s.at(2), s.at(3).get<double>()});
    }
    for (const auto& s : j.at("samples")) {
      b.samples.push_back({s.at(0), s.at(1), s.at(2), s.at(3).get<std::vector<double>>()});
    }
    for (const auto& f : j.at("flows")) {
      FlowCell c{f.at(0), f.at(1), f.at(2), f.at(3).get<double>(), f.at(4).get<double>(), {}};
      if (!f.at(5).is_null()) c.ratio = f.at(5).get<double>();
      b.flows.push_back(std::move(c));
    }
    for (const auto& c : j.at("chords")) {
      ChordTable t;
      t.subfield = c.at("subfield");
      t.window = c.at("window");
      t.matrix.countries = c.at("countries").get<std::vector<std::string>>();
      t.matrix.counts = c.at("counts").get<std::vector<std::vector<std::uint64_t>>>();
      b.chords.push_back(std::move(t));
    }
    for (const auto& s : j.at("sankey")) {
      b.sankey.push_back({s.at(0), s.at(1), s.at(2), s.at(3).get<std::uint64_t>(),
                          s.at(4).get<double>()});
    }
    for (const auto& s : j.at("sankey_coverage")) {
      b.sankey_coverage.push_back({s.at(0), s.at(1), s.at(2).get<std::uint64_t>()});
    }
    for (const auto& r : j.at("industry")) {
      b.industry.push_back({r.at(0), r.at(1).get<std::size_t>(), r.at(2),
                            r.at(3).get<std::uint64_t>()});
    }
    for (const auto& m : j.at("migration")) {
      b.migration.push_back({m.at(0), m.at(1), m.at(2).get<std::uint64_t>(),
                             m.at(3).get<std::int64_t>()});
    }
    for (const auto& n : j.at("networks")) {
      NetworkEdges ne{n.at("subfield"), n.at("window"), {}};
      for (const auto& e : n.at("edges")) {
        ne.edges.push_back({e.at(0), e.at(1), e.at(2).get<std::uint64_t>()});
      }
      b.networks.push_back(std::move(ne));
    }
    for (const auto& y : j.at("yearly")) {
      auto s = parse_subfield(y.at(1).get<std::string>());
      if (!s) throw SchemaError("yearly", "unknown subfield");
      b.yearly.push_back({y.at(0).get<int>(), *s, y.at(2).get<std::uint64_t>(),
                          y.at(3).get<std::uint64_t>(), y.at(4).get<std::uint64_t>()});
    }
    b.notes = field<std::vector<std::string>>(j, "notes");
    return b;
  } catch (const json::exception& e) {
    throw SchemaError("metrics", std::string("malformed metrics cache: ") + e.what());
  }
}

void save_bundle(const MetricsBundle& bundle, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << bundle_to_json(bundle);
}

MetricsBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return bundle_from_json(buf.str());
}

}  // namespace scholarmetrics::metrics
