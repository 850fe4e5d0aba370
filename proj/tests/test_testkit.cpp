#include <doctest.h>

#include <cmath>

#include "scholarmetrics/collab.hpp"
#include "scholarmetrics/corpus_io.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/impact.hpp"
#include "scholarmetrics/testkit/oracles.hpp"
#include "scholarmetrics/testkit/synth.hpp"

using namespace scholarmetrics;
using namespace scholarmetrics::testkit;

TEST_CASE("synthetic corpus is deterministic in the seed") {
  SynthSpec spec;
  spec.works_per_cell = 8;
  auto a = generate_corpus(spec);
  auto b = generate_corpus(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(work_to_json_line(a.works()[i]) == work_to_json_line(b.works()[i]));
  }
  spec.seed += 1;
  auto c = generate_corpus(spec);
  bool differs = c.size() != a.size();
  for (std::size_t i = 0; !differs && i < a.size(); ++i) {
    differs = work_to_json_line(a.works()[i]) != work_to_json_line(c.works()[i]);
  }
  CHECK(differs);
}

TEST_CASE("synthetic corpus shape") {
  SynthSpec spec;
  spec.works_per_cell = 6;
  auto c = generate_corpus(spec);
  CHECK(c.targets(std::nullopt, std::nullopt).size() == 5 * 5 * 6);
  for (auto sf : kAllSubfields) {
    for (const auto& w : c.windows()) CHECK(c.targets(sf, w).size() == 6);
  }
}

TEST_CASE("planted power law is recovered") {
  SynthSpec spec;
  spec.works_per_cell = 100;
  spec.subfields = {Subfield::ML};
  auto c = generate_corpus(spec);
  std::vector<std::uint64_t> counts;
  for (const auto* w : c.targets(Subfield::ML, std::nullopt)) counts.push_back(w->citation_count);
  REQUIRE(counts.size() == 500);
  auto fit = impact::fit_power_law(counts);
  CHECK(std::abs(fit.alpha - 1.5) <= 0.15);
}

TEST_CASE("industry probability zero gives no industry authorships") {
  SynthSpec spec;
  spec.works_per_cell = 10;
  spec.industry_probability = 0.0;
  auto c = generate_corpus(spec);
  for (auto sf : kAllSubfields) {
    for (const auto& w : c.windows()) CHECK(collab::industry_rate(c, w, sf) == 0.0);
  }
}

TEST_CASE("invalid specs are rejected") {
  SynthSpec spec;
  spec.works_per_cell = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.alpha = -1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.min_authors_per_work = 5;
  spec.max_authors_per_work = 2;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("oracles on hand examples") {
  const std::vector<std::uint64_t> h{10, 8, 5, 4, 3};
  CHECK(oracle_h_index(h) == 4);
  CHECK(oracle_h_index(std::vector<std::uint64_t>{1, 1, 1, 1}) == 1);
  CHECK(oracle_h_index(std::vector<std::uint64_t>{}) == 0);

  const std::vector<double> p{0.5, 0.25, 0.25};
  CHECK(oracle_entropy(p) == doctest::Approx(1.039721).epsilon(1e-6));
  CHECK(oracle_js({{"a", 1.0}}, {{"a", 0.5}, {"b", 0.5}}) ==
        doctest::Approx(0.311278).epsilon(1e-6));

  const std::vector<WeightedEdge> tri{{0, 1, 2}, {1, 2, 2}, {0, 2, 2}};
  for (double v : oracle_clustering(3, tri)) CHECK(v == doctest::Approx(1.0));
  for (double v : oracle_unweighted_clustering(3, tri)) CHECK(v == 1.0);
  CHECK_THROWS_AS(oracle_clustering(kOracleMaxNodes + 1, {}), Error);
}
