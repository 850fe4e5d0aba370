#include <doctest.h>

#include <filesystem>

#include <fmt/format.h>
#include <json.hpp>

#include "scholarmetrics/corpus_io.hpp"
#include "scholarmetrics/csv.hpp"
#include "scholarmetrics/pipeline.hpp"
#include "scholarmetrics/testkit/synth.hpp"
#include "support.hpp"

using namespace scholarmetrics;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sm_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Writes a synthetic works file and returns a config that builds from it.
RunConfig synthetic_config(const fs::path& dir, std::vector<Stage> stages) {
  testkit::SynthSpec spec;
  spec.works_per_cell = 10;
  auto corpus = testkit::generate_corpus(spec);
  write_works_jsonl_file(dir / "works.jsonl", corpus.works());
  RunConfig c;
  c.stages = std::move(stages);
  c.output_dir = dir / "out";
  c.build_input = dir / "works.jsonl";
  c.keyword_file = fs::path(SCHOLARMETRICS_TEST_DATA_DIR) / "industry_keywords.txt";
  c.metrics.workers = 2;
  return c;
}

}  // namespace

TEST_CASE("build, metrics and export from a works file") {
  auto dir = scratch("bme");
  auto c = synthetic_config(dir, {Stage::Build, Stage::Metrics, Stage::Export});
  auto report = run_pipeline(c);
  REQUIRE_MESSAGE(report.ok(), report.error_message);
  CHECK(exit_code(report) == 0);
  CHECK(report.stages.size() == 3);
  for (const auto& s : report.stages) CHECK(s.status == "ok");

  CHECK(fs::exists(c.corpus_path()));
  CHECK(fs::exists(manifest_path_for(c.corpus_path())));
  CHECK(fs::exists(c.metrics_cache()));
  for (const auto& m : metrics::registry()) {
    CHECK(fs::exists(c.export_dir() / "metrics" / (std::string(m.id) + ".csv")));
  }
  std::set<int> indicators;
  for (const auto& m : metrics::registry()) {
    if (m.indicator > 0) indicators.insert(m.indicator);
  }
  CHECK(indicators.size() == 12);

  auto json = nlohmann::json::parse(smtest::slurp(c.run_report()));
  CHECK(json["stages"].size() == 3);
  CHECK(json.contains("provenance"));

  SUBCASE("export alone reuses the metrics cache") {
    auto again = c;
    again.stages = {Stage::Export};
    again.export_metrics = std::vector<std::string>{"h_index", "collaboration_index"};
    auto r = run_pipeline(again);
    CHECK(r.ok());
    CHECK(fs::exists(c.export_dir() / "metrics" / "h_index.csv"));
    CHECK_FALSE(fs::exists(c.export_dir() / "metrics" / "industry_rate.csv"));
    CHECK(r.omitted_metrics.size() == metrics::registry().size() - 2);
  }
  SUBCASE("disabled metrics are absent from the exports") {
    auto off = c;
    off.stages = {Stage::Metrics, Stage::Export};
    off.metrics.disabled = {"collaboration_intensity"};
    auto r = run_pipeline(off);
    CHECK(r.ok());
    CHECK_FALSE(fs::exists(c.export_dir() / "metrics" / "weighted_clustering.csv"));
    CHECK(fs::exists(c.export_dir() / "metrics" / "h_index.csv"));
  }
}

TEST_CASE("stages without their inputs fail with a precondition error") {
  auto dir = scratch("pre");
  RunConfig c;
  c.stages = {Stage::Export};
  c.output_dir = dir / "out";
  c.keyword_file = default_keyword_file();
  auto r = run_pipeline(c);
  CHECK_FALSE(r.ok());
  REQUIRE(r.error_kind);
  CHECK(*r.error_kind == ErrorKind::PreconditionError);
  CHECK(r.error_message.find("metrics.json") != std::string::npos);
  CHECK(r.failed_stage == Stage::Export);
  CHECK(exit_code(r) == 4);

  c.stages = {Stage::Metrics};
  auto m = run_pipeline(c);
  CHECK(*m.error_kind == ErrorKind::PreconditionError);
  CHECK(m.error_message.find("corpus.jsonl") != std::string::npos);

  c.stages = {Stage::Build};
  try {
    run_pipeline(c);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(exit_code_for(e.kind()) == 2);
  }
}

TEST_CASE("full run from the fixture listing through a fake transport") {
  auto dir = scratch("full");
  const std::string base = "http://fixture.test";
  smtest::FakeTransport t;
  for (int k : {1, 2, 3, 5, 6, 8, 15}) {
    const std::string doi = fmt::format("10.1109/cvpr.2019.{:05}", k);
    t.on(base + "/works/doi:" + doi, 200,
         smtest::openalex_work(fmt::format("W{}", k), doi, "2019-06-16", {"R1", "W1"},
                               "Computer Vision and Pattern Recognition", "article", 3));
    t.on(base + "/works?filter=cites:W" + std::to_string(k) + "*", 200,
         R"({"meta":{"next_cursor":null},"results":[)" +
             smtest::openalex_work("C" + std::to_string(k), "", "2020-01-01", {}, "Physics") +
             "]}");
  }
  t.on(base + "/works/R1", 200, smtest::openalex_work("R1", "10.1/r1", "2015-01-01", {}, "Mathematics"));

  auto cfg_text = fmt::format(R"(
[run]
output_dir = "out"
[harvest]
venues = ["CVPR"]
start_year = 2019
end_year = 2019
listing_dir = "{}"
listing_url_template = ""
openalex_base_url = "{}"
min_request_interval_ms = 1
max_retries = 0
)",
                              smtest::fixture("dblp").string(), base);
  auto c = run_config_from_text(cfg_text, dir);
  c.keyword_file = fs::path(SCHOLARMETRICS_TEST_DATA_DIR) / "industry_keywords.txt";
  auto r = run_pipeline(c, &t);
  REQUIRE_MESSAGE(r.ok(), r.error_message);
  CHECK(r.stages.size() == 4);
  CHECK(r.skip_counts.at("filter") == 11);
  CHECK(fs::exists(c.skip_report()));

  auto corpus = load_corpus(c.corpus_path());
  CHECK(corpus.targets(Subfield::CV, std::nullopt).size() == 7);

  auto ci = read_csv(c.export_dir() / "metrics" / "collaboration_index.csv");
  bool saw_cell = false;
  for (const auto& row : ci) {
    if (row[1] == "CV" && row[2] == "2015-2019") {
      saw_cell = true;
      CHECK(row[4] == "1");
    }
  }
  CHECK(saw_cell);

  SUBCASE("a transient fetch failure leaves the harvest incomplete") {
    smtest::FakeTransport flaky;
    flaky.on(base + "/works/doi:*", 0);
    auto d2 = scratch("flaky");
    auto c2 = run_config_from_text(cfg_text, d2);
    c2.keyword_file = c.keyword_file;
    c2.stages = {Stage::Harvest};
    auto r2 = run_pipeline(c2, &flaky);
    CHECK_FALSE(r2.harvest_complete);
    CHECK(exit_code(r2) == 4);
  }
}
