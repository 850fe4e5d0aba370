#include "scholarmetrics/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "scholarmetrics/corpus_io.hpp"
#include "scholarmetrics/export.hpp"
#include "scholarmetrics/hash.hpp"

namespace scholarmetrics {

namespace fs = std::filesystem;

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Harvest: return "harvest";
    case Stage::Build: return "build";
    case Stage::Metrics: return "metrics";
    case Stage::Export: return "export";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view text) {
  for (Stage s : {Stage::Harvest, Stage::Build, Stage::Metrics, Stage::Export}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

fs::path default_keyword_file() {
  for (const char* dir : {SCHOLARMETRICS_SOURCE_DATA_DIR, SCHOLARMETRICS_INSTALL_DATA_DIR}) {
    fs::path p = fs::path(dir) / "industry_keywords.txt";
    if (fs::exists(p)) return p;
  }
  return fs::path(SCHOLARMETRICS_SOURCE_DATA_DIR) / "industry_keywords.txt";
}

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

int as_int(std::int64_t v, std::string_view key) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    config_error(fmt::format("{} is out of range", key));
  }
  return static_cast<int>(v);
}

std::size_t as_size(std::int64_t v, std::string_view key) {
  if (v < 0) config_error(fmt::format("{} must be nonnegative", key));
  return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig run_config_from_text(std::string_view text, const fs::path& base_dir,
                               const std::vector<std::string>& overrides,
                               std::optional<std::string> contact_email_env) {
  config::Document doc = config::parse_document(text);
  for (const auto& o : overrides) config::apply_override(doc, o);
  config::Reader r(doc);
  RunConfig c;
  c.keyword_file = default_keyword_file();

  // [run]
  if (auto v = r.strings("run", "stages")) {
    c.stages.clear();
    for (const auto& s : *v) {
      auto st = parse_stage(s);
      if (!st) config_error("run.stages: unknown stage '" + s + "'");
      c.stages.push_back(*st);
    }
  }
  if (auto v = r.string("run", "output_dir")) c.output_dir = resolve(base_dir, *v);
  else c.output_dir = resolve(base_dir, c.output_dir.string());
  if (auto v = r.integer("run", "workers")) c.metrics.workers = as_int(*v, "run.workers");
  if (auto v = r.string("run", "keyword_file")) c.keyword_file = resolve(base_dir, *v);

  // [harvest]
  auto& h = c.harvest;
  if (auto v = r.strings("harvest", "venues")) h.venues = *v;
  if (auto v = r.integer("harvest", "start_year")) h.start_year = as_int(*v, "harvest.start_year");
  if (auto v = r.integer("harvest", "end_year")) h.end_year = as_int(*v, "harvest.end_year");
  if (auto v = r.string("harvest", "listing_dir")) h.listing_dir = resolve(base_dir, *v);
  if (auto v = r.string("harvest", "listing_url_template")) h.listing_url_template = *v;
  if (auto v = r.string("harvest", "openalex_base_url")) h.openalex_base_url = *v;
  if (auto v = r.string("harvest", "cache_dir")) c.http_cache_dir = resolve(base_dir, *v);
  if (auto v = r.string("harvest", "contact_email")) h.policy.contact_email = *v;
  else if (contact_email_env) h.policy.contact_email = *contact_email_env;
  if (auto v = r.integer("harvest", "max_concurrent_requests")) {
    h.policy.max_concurrent_requests = as_int(*v, "harvest.max_concurrent_requests");
  }
  if (auto v = r.integer("harvest", "min_request_interval_ms")) {
    h.policy.min_request_interval = std::chrono::milliseconds(*v);
  }
  if (auto v = r.integer("harvest", "max_retries")) {
    h.policy.max_retries = as_int(*v, "harvest.max_retries");
  }
  if (auto v = r.real("harvest", "backoff")) h.policy.backoff = *v;
  if (auto v = r.integer("harvest", "citer_cap")) h.policy.citer_cap = as_size(*v, "harvest.citer_cap");
  if (auto v = r.integer("harvest", "min_pages")) h.min_pages = as_int(*v, "harvest.min_pages");
  if (auto v = r.string("harvest", "expand")) {
    auto mode = harvest::parse_expand_mode(*v);
    if (!mode) config_error("harvest.expand must be references, citers or both");
    h.expand = *mode;
  }

  // [build]
  if (auto v = r.string("build", "input")) c.build_input = resolve(base_dir, *v);
  if (auto v = r.integer("build", "start_year")) c.window_start = as_int(*v, "build.start_year");
  if (auto v = r.integer("build", "end_year")) c.window_end = as_int(*v, "build.end_year");
  if (auto v = r.integer("build", "window_width")) c.window_width = as_int(*v, "build.window_width");

  // [metrics]
  auto& m = c.metrics;
  if (auto v = r.strings("metrics", "subfields")) {
    m.subfields.clear();
    for (const auto& s : *v) {
      auto sf = parse_subfield(s);
      if (!sf) config_error("metrics.subfields: unknown subfield '" + s + "'");
      m.subfields.push_back(*sf);
    }
  }
  if (auto v = r.strings("metrics", "disabled")) m.disabled = {v->begin(), v->end()};
  if (auto v = r.integer("metrics", "velocity_threshold")) {
    m.velocity_threshold = as_size(*v, "metrics.velocity_threshold");
  }
  if (auto v = r.integer("metrics", "high_impact_threshold")) {
    m.high_impact_threshold = as_size(*v, "metrics.high_impact_threshold");
  }
  if (auto v = r.integer("metrics", "top_percent")) m.top_percent = as_int(*v, "metrics.top_percent");
  if (auto v = r.integer("metrics", "clustering_top_k")) {
    m.clustering_top_k = as_size(*v, "metrics.clustering_top_k");
  }
  if (auto v = r.integer("metrics", "stability_top_k")) {
    m.stability_top_k = as_size(*v, "metrics.stability_top_k");
  }
  if (auto v = r.integer("metrics", "mobility_top_k")) {
    m.mobility_top_k = as_size(*v, "metrics.mobility_top_k");
  }
  if (auto v = r.string("metrics", "top_k_scope")) {
    if (*v == "global") m.top_k_scope = metrics::TopKScope::Global;
    else if (*v == "per_window") m.top_k_scope = metrics::TopKScope::PerWindow;
    else config_error("metrics.top_k_scope must be global or per_window");
  }
  if (auto v = r.real("metrics", "js_log_base")) m.js_log_base = *v;
  if (auto v = r.integer("metrics", "top_industry_k")) {
    m.top_industry_k = as_size(*v, "metrics.top_industry_k");
  }
  if (auto v = r.integer("metrics", "migration_top_n")) {
    m.migration_top_n = as_size(*v, "metrics.migration_top_n");
  }
  if (auto v = r.string("metrics", "migration_scope")) {
    if (*v == "all") m.migration_scope = metrics::MigrationScope::AllAuthors;
    else if (*v == "top_k") m.migration_scope = metrics::MigrationScope::TopK;
    else config_error("metrics.migration_scope must be all or top_k");
  }
  if (auto v = r.string("metrics", "stability_inactive")) {
    if (*v == "exclude") m.stability_policy = collab::InactivePolicy::Exclude;
    else if (*v == "zero") m.stability_policy = collab::InactivePolicy::Zero;
    else config_error("metrics.stability_inactive must be exclude or zero");
  }

  // [export]
  if (auto v = r.strings("export", "metrics")) c.export_metrics = *v;

  r.reject_unknown({"run", "harvest", "build", "metrics", "export"});
  return c;
}

RunConfig load_run_config(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::optional<std::string> env;
  if (const char* e = std::getenv(std::string(kContactEmailEnv).c_str()); e && *e) env = e;
  try {
    return run_config_from_text(buf.str(), fs::absolute(path).parent_path(), overrides, env);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) {
      throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
    }
    throw;
  }
}

void validate(const RunConfig& c) {
  auto has = [&](Stage s) { return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end(); };
  if (c.stages.empty()) config_error("run.stages must name at least one stage");
  for (std::size_t i = 1; i < c.stages.size(); ++i) {
    if (c.stages[i] <= c.stages[i - 1]) {
      config_error("run.stages must be an ordered subset of harvest, build, metrics, export");
    }
  }
  try {
    make_window_partition(c.window_start, c.window_end, c.window_width);
    c.metrics.validate();
    if (has(Stage::Harvest)) {
      c.harvest.policy.validate();
      if (c.harvest.venues.empty()) config_error("harvest.venues must not be empty");
      for (const auto& v : c.harvest.venues) {
        if (!canonical_venue(v)) config_error("harvest.venues: unknown venue '" + v + "'");
      }
      if (c.harvest.start_year > c.harvest.end_year) {
        config_error("harvest.start_year must not exceed harvest.end_year");
      }
      if (c.harvest.min_pages < 1) config_error("harvest.min_pages must be >= 1");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) config_error(e.what());
    throw;
  }
  if (c.export_metrics) {
    for (const auto& id : *c.export_metrics) {
      if (!metrics::find_metric(id)) config_error("export.metrics: unknown metric '" + id + "'");
    }
  }
  if ((has(Stage::Harvest) || has(Stage::Metrics)) && !fs::exists(c.keyword_file)) {
    config_error("keyword file not found: " + c.keyword_file.string());
  }
  if (has(Stage::Harvest) && c.harvest.listing_dir && !fs::is_directory(*c.harvest.listing_dir)) {
    config_error("harvest.listing_dir not found: " + c.harvest.listing_dir->string());
  }
  if (has(Stage::Build) && !has(Stage::Harvest) && !fs::exists(c.build_source())) {
    config_error("build input not found: " + c.build_source().string());
  }
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigError: return 2;
    case ErrorKind::TransientError: return 3;
    default: return 4;
  }
}

int exit_code(const RunReport& report) noexcept {
  if (report.error_kind) return exit_code_for(*report.error_kind);
  return report.harvest_complete ? 0 : 4;
}

namespace {

void require_input(const fs::path& path, Stage producer) {
  if (!fs::exists(path)) {
    throw Error(ErrorKind::PreconditionError,
                fmt::format("missing input {} (run the {} stage first)", path.string(),
                            to_string(producer)));
  }
}

void run_harvest_stage(const RunConfig& c, harvest::Transport* transport, RunReport& report,
                       StageReport& stage) {
  auto keywords = harvest::IndustryKeywordList::load(c.keyword_file);
  harvest::ResponseCache cache(c.http_cache());
  std::optional<harvest::HttpTransport> http;
  if (!transport) transport = &http.emplace();
  auto result = harvest::run_harvest(c.harvest, keywords, cache, *transport);

  write_works_jsonl_file(c.harvest_works(), result.works);
  result.skips.write_csv(c.skip_report());
  stage.outputs = {fs::relative(c.harvest_works(), c.output_dir).generic_string(),
                   fs::relative(c.skip_report(), c.output_dir).generic_string()};
  for (const auto& r : result.skips.records()) ++report.skip_counts[r.stage];
  report.harvest_complete = result.complete;
  report.provenance["keyword_list_sha256"] = keywords.hash();
  report.provenance["harvest_works_sha256"] = sha256_file(c.harvest_works());
  stage.notes.push_back(fmt::format("listings read: {}", result.listings_read));
  stage.notes.push_back(fmt::format("dois selected: {}", result.dois_selected));
  stage.notes.push_back(fmt::format("works written: {}", result.works.size()));
  if (!result.complete) {
    stage.status = "partial";
    stage.notes.push_back("some neighbors could not be resolved; see the skip report");
  }
}

void run_build_stage(const RunConfig& c, RunReport& report, StageReport& stage) {
  const fs::path input = c.build_source();
  require_input(input, Stage::Harvest);
  auto raw = read_works_jsonl_file(input);

  harvest::SkipReport skips;
  std::set<std::string> ids, target_dois, other_dois;
  std::vector<WorkRecord> works;
  works.reserve(raw.size());
  for (auto& w : raw) {
    w.doi = normalize_doi(w.doi);
    if (!ids.insert(w.work_id).second) {
      skips.add(w.doi, "build", "duplicate_work_id");
      continue;
    }
    if (w.role == WorkRole::Target) {
      if (!w.subfield) assign_subfield(w);
      if (!w.doi.empty() && !target_dois.insert(w.doi).second) {
        skips.add(w.doi, "build", "duplicate");
        continue;
      }
    }
    works.push_back(std::move(w));
  }
  // Neighbor records may repeat a target's DOI under another work id; only the
  // first holder keeps it.
  for (auto& w : works) {
    if (w.role == WorkRole::Target || w.doi.empty()) continue;
    if (target_dois.contains(w.doi) || !other_dois.insert(w.doi).second) w.doi.clear();
  }
  for (auto& w : works) {
    w.citation_count = std::max<std::uint64_t>(w.citation_count, w.citer_events.size());
  }

  auto windows = make_window_partition(c.window_start, c.window_end, c.window_width);
  const std::string input_hash = sha256_file(input);
  std::string provenance = fmt::format("works-sha256:{} windows:{}-{}/{}", input_hash,
                                       c.window_start, c.window_end, c.window_width);
  Corpus corpus(std::move(works), windows, provenance);
  save_corpus(c.corpus_path(), corpus,
              {{"input_sha256", input_hash},
               {"window_width", std::to_string(c.window_width)}});
  skips.write_csv(c.build_skips());
  for (const auto& r : skips.records()) ++report.skip_counts[r.stage];

  report.provenance["corpus_sha256"] = sha256_file(c.corpus_path());
  stage.outputs = {fs::relative(c.corpus_path(), c.output_dir).generic_string(),
                   fs::relative(manifest_path_for(c.corpus_path()), c.output_dir).generic_string(),
                   fs::relative(c.build_skips(), c.output_dir).generic_string()};
  stage.notes.push_back(fmt::format("works: {}, targets: {}, authors: {}", corpus.size(),
                                    corpus.targets(std::nullopt, std::nullopt).size(),
                                    corpus.authors().size()));
}

void run_metrics_stage(const RunConfig& c, RunReport& report, StageReport& stage) {
  require_input(c.corpus_path(), Stage::Build);
  Corpus corpus = load_corpus(c.corpus_path());
  auto keywords = harvest::IndustryKeywordList::load(c.keyword_file);
  metrics::MetricsOptions options = c.metrics;
  options.keywords = &keywords;
  auto bundle = metrics::compute_metrics(corpus, options);
  metrics::save_bundle(bundle, c.metrics_cache());
  report.provenance["keyword_list_sha256"] = keywords.hash();
  report.provenance["metrics_cache_sha256"] = sha256_file(c.metrics_cache());
  stage.outputs = {fs::relative(c.metrics_cache(), c.output_dir).generic_string()};
  stage.notes = bundle.notes;
}

void run_export_stage(const RunConfig& c, RunReport& report, StageReport& stage) {
  require_input(c.metrics_cache(), Stage::Metrics);
  auto bundle = metrics::load_bundle(c.metrics_cache());
  auto summary = exporter::export_all(bundle, c.export_dir(), c.export_metrics);
  for (const auto& f : summary.files) {
    stage.outputs.push_back((fs::relative(c.export_dir(), c.output_dir) / f).generic_string());
  }
  report.omitted_metrics = summary.omitted_metrics;
  report.provenance["export_tree_sha256"] = sha256_tree(c.export_dir());
}

}  // namespace

RunReport run_pipeline(const RunConfig& config, harvest::Transport* transport) {
  validate(config);
  fs::create_directories(config.output_dir);
  RunReport report;
  report.provenance["export_schema_version"] = std::to_string(exporter::kSchemaVersion);

  for (Stage s : config.stages) {
    StageReport stage;
    stage.stage = s;
    stage.status = "ok";
    const auto start = std::chrono::steady_clock::now();
    try {
      switch (s) {
        case Stage::Harvest: run_harvest_stage(config, transport, report, stage); break;
        case Stage::Build: run_build_stage(config, report, stage); break;
        case Stage::Metrics: run_metrics_stage(config, report, stage); break;
        case Stage::Export: run_export_stage(config, report, stage); break;
      }
    } catch (const Error& e) {
      stage.status = "failed";
      report.failed_stage = s;
      report.error_kind = e.kind();
      report.error_message = e.what();
    } catch (const std::exception& e) {
      stage.status = "failed";
      report.failed_stage = s;
      report.error_kind = ErrorKind::IoError;
      report.error_message = e.what();
    }
    stage.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.stages.push_back(std::move(stage));
    if (report.failed_stage) break;
  }

  std::ofstream out(config.run_report(), std::ios::binary | std::ios::trunc);
  out << run_report_json(report);
  return report;
}

std::string run_report_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["status"] = report.failed_stage ? "failed" : (report.harvest_complete ? "ok" : "partial");
  j["exit_code"] = exit_code(report);
  if (report.failed_stage) {
    j["failed_stage"] = to_string(*report.failed_stage);
    j["error_kind"] = to_string(*report.error_kind);
    j["error"] = report.error_message;
  }
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"stage", to_string(s.stage)},
                      {"status", s.status},
                      {"seconds", s.seconds},
                      {"outputs", s.outputs},
                      {"notes", s.notes}});
  }
  j["stages"] = stages;
  j["skip_counts"] = report.skip_counts;
  j["omitted_metrics"] = report.omitted_metrics;
  j["provenance"] = report.provenance;
  return j.dump(2) + "\n";
}

}  // namespace scholarmetrics
