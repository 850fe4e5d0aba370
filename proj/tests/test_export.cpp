#include <doctest.h>

#include <filesystem>

#include "scholarmetrics/csv.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/export.hpp"
#include "scholarmetrics/testkit/synth.hpp"
#include "support.hpp"

using namespace scholarmetrics;
using namespace scholarmetrics::exporter;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sm_export_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const metrics::MetricsBundle& synthetic_bundle() {
  static const metrics::MetricsBundle bundle = [] {
    testkit::SynthSpec spec;
    spec.works_per_cell = 12;
    auto corpus = testkit::generate_corpus(spec);
    metrics::MetricsOptions opts;
    opts.workers = 2;
    return metrics::compute_metrics(corpus, opts);
  }();
  return bundle;
}

}  // namespace

TEST_CASE("csv primitives") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_real(154.767) == "154.767");
  CHECK(format_real(0.1) == "0.1");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);

  auto dir = scratch("csv");
  {
    CsvWriter w(dir / "t.csv", {"a", "b"});
    w.row({"x,y", "line\nbreak"});
    CHECK_THROWS_AS(w.row({"too", "many", "fields"}), Error);
  }
  auto rows = read_csv(dir / "t.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<std::string>{"x,y", "line\nbreak"});
  CHECK(slug("Web&IR") == "WebIR");
}

TEST_CASE("chord matrix export") {
  auto dir = scratch("chord");
  collab::CountryPairMatrix m{{"CN", "US"}, {{0, 5}, {5, 0}}};
  export_chord_matrix(m, dir / "c.csv", dir / "c.totals.csv");
  auto rows = read_csv(dir / "c.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"country_a", "country_b", "count"});
  CHECK(rows[1] == std::vector<std::string>{"CN", "US", "5"});
  auto totals = read_csv(dir / "c.totals.csv");
  CHECK(totals.size() == 3);

  export_chord_matrix(collab::CountryPairMatrix{}, dir / "e.csv", dir / "e.totals.csv");
  CHECK(read_csv(dir / "e.csv").size() == 1);

  collab::CountryPairMatrix skew{{"CN", "US"}, {{0, 5}, {4, 0}}};
  CHECK_THROWS_AS(export_chord_matrix(skew, dir / "s.csv", dir / "s.t.csv"), Error);
  collab::CountryPairMatrix diag{{"CN"}, {{2}}};
  CHECK_THROWS_AS(export_chord_matrix(diag, dir / "d.csv", dir / "d.t.csv"), Error);
}

TEST_CASE("sankey export") {
  auto dir = scratch("sankey");
  std::vector<metrics::SankeyRow> rows{{"AI", "Physics", "citing", 1, 0.25},
                                       {"AI", "Biology", "citing", 3, 0.75}};
  std::vector<metrics::SankeyCoverage> cov{{"AI", "citing", 4}, {"AI", "cited", 0}};
  export_sankey_flows(rows, cov, dir / "s.csv", dir / "cov.csv");
  auto out = read_csv(dir / "s.csv");
  REQUIRE(out.size() == 3);
  CHECK(out[1] == std::vector<std::string>{"AI", "Biology", "citing", "3", "0.75"});
  CHECK(out[2] == std::vector<std::string>{"AI", "Physics", "citing", "1", "0.25"});
  auto c = read_csv(dir / "cov.csv");
  REQUIRE(c.size() == 3);
  CHECK(c[1][3] == "no classified neighbors");
}

TEST_CASE("violin samples are sorted with a coverage sidecar") {
  auto dir = scratch("violin");
  std::vector<metrics::SampleSet> s{{"m", "CV", "2000-2004", {3, 1, 2}},
                                    {"m", "AI", "2000-2004", {}}};
  export_violin_samples(s, dir / "v.csv", dir / "cov.csv");
  auto v = read_csv(dir / "v.csv");
  REQUIRE(v.size() == 4);
  CHECK(v[1][3] == "1");
  CHECK(v[3][3] == "3");
  auto cov = read_csv(dir / "cov.csv");
  REQUIRE(cov.size() == 3);
  CHECK(cov[1] == std::vector<std::string>{"m", "AI", "2000-2004", "0"});
}

TEST_CASE("metric tables from a synthetic bundle") {
  const auto& bundle = synthetic_bundle();
  auto dir = scratch("tables");
  CHECK(export_metric_table(bundle, "collaboration_index", dir / "ci.csv") == 25);
  auto rows = read_csv(dir / "ci.csv");
  CHECK(rows[0] == std::vector<std::string>{"metric_id", "subfield", "window", "statistic",
                                            "value", "sample_ref"});
  CHECK(rows[1][3] == "scalar");
  CHECK_THROWS_AS(export_metric_table(bundle, "no_such_metric", dir / "x.csv"), Error);

  auto sum = export_all(bundle, dir / "all");
  CHECK(sum.omitted_metrics.empty());
  CHECK(fs::exists(dir / "all" / "metric_registry.csv"));
  CHECK(fs::exists(dir / "all" / "violin_samples.csv"));
  CHECK(fs::exists(dir / "all" / "oe_matrix.csv"));
  CHECK(fs::exists(dir / "all" / "migration_flows.csv"));
  CHECK(std::is_sorted(sum.files.begin(), sum.files.end()));
  for (const auto& m : metrics::registry()) {
    CHECK(fs::exists(dir / "all" / "metrics" / (std::string(m.id) + ".csv")));
  }

  const std::optional<std::vector<std::string>> only{{"h_index"}};
  auto partial = export_all(bundle, dir / "all", only);
  CHECK_FALSE(fs::exists(dir / "all" / "metrics" / "collaboration_index.csv"));
  CHECK(partial.omitted_metrics.size() == metrics::registry().size() - 1);
}

TEST_CASE("bundle json round trip") {
  const auto& bundle = synthetic_bundle();
  auto back = metrics::bundle_from_json(metrics::bundle_to_json(bundle));
  CHECK(back.scalars.size() == bundle.scalars.size());
  CHECK(back.samples.size() == bundle.samples.size());
  CHECK(back.flows.size() == bundle.flows.size());
  CHECK(back.chords.size() == bundle.chords.size());
  CHECK(back.windows == bundle.windows);
  CHECK(metrics::bundle_to_json(back) == metrics::bundle_to_json(bundle));

  auto a = scratch("rt1"), b = scratch("rt2");
  export_all(bundle, a);
  export_all(back, b);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    CHECK(smtest::slurp(entry.path()) == smtest::slurp(b / fs::relative(entry.path(), a)));
  }
}
