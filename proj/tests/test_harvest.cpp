#include <doctest.h>

#include <algorithm>

#include <fmt/format.h>

#include "scholarmetrics/error.hpp"
#include "scholarmetrics/harvest/harvest.hpp"
#include "support.hpp"

using namespace scholarmetrics;
using namespace scholarmetrics::harvest;
using smtest::FakeTransport;

namespace {

const std::string kBase = "http://fixture.test";

HarvestOptions fixture_options() {
  HarvestOptions o;
  o.venues = {"cvpr"};
  o.start_year = 2019;
  o.end_year = 2019;
  o.listing_dir = smtest::fixture("dblp");
  o.listing_url_template.clear();
  o.openalex_base_url = kBase;
  o.policy.min_request_interval = std::chrono::milliseconds(1);
  o.policy.max_retries = 0;
  o.expand = ExpandMode::References;
  return o;
}

void serve_selected(FakeTransport& t, const std::vector<int>& skip = {}) {
  for (int k : {1, 2, 3, 5, 6, 8, 15}) {
    if (std::find(skip.begin(), skip.end(), k) != skip.end()) continue;
    const std::string doi = fmt::format("10.1109/cvpr.2019.{:05}", k);
    t.on(kBase + "/works/doi:" + doi, 200,
         smtest::openalex_work(fmt::format("W{}", 100 + k), doi, "2019-06-16", {"R1"}));
  }
  t.on(kBase + "/works/R1", 200, smtest::openalex_work("R1", "10.1/r1", "2015-01-01"));
}

}  // namespace

TEST_CASE("harvest from a local listing") {
  FakeTransport t;
  serve_selected(t, {6});
  t.on(kBase + "/works/doi:10.1109/cvpr.2019.00006", 200,
       smtest::openalex_work("W900", "10.1109/cvpr.2019.00006", "2019-06-16", {}, "AI",
                             "proceedings"));
  IndustryKeywordList kw({"google"});
  ResponseCache cache;
  auto r = run_harvest(fixture_options(), kw, cache, t);

  CHECK(r.listings_read == 1);
  CHECK(r.dois_selected == 7);
  CHECK(r.complete);
  // Six targets (one front-matter record dropped) plus the shared reference.
  REQUIRE(r.works.size() == 7);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(r.works[i].role == WorkRole::Target);
    CHECK(r.works[i].venue_key == "CVPR");
    CHECK(r.works[i].subfield == Subfield::CV);
    CHECK(r.works[i].authorships[0].is_industry);
  }
  CHECK(r.works.back().work_id == "R1");
  CHECK(r.works.back().role == WorkRole::Reference);
  CHECK(r.skips.count("filter") == 11);
  CHECK(r.skips.count("fetch") == 1);
  CHECK(r.skips.records().back() ==
        SkipRecord{"10.1109/cvpr.2019.00006", "fetch", "proceedings_record"});
}

TEST_CASE("not-found dois are skipped, transient failures mark the harvest incomplete") {
  FakeTransport t;
  serve_selected(t, {2, 3});
  t.on(kBase + "/works/doi:10.1109/cvpr.2019.00003", 0);
  IndustryKeywordList kw({"google"});
  ResponseCache cache;
  auto r = run_harvest(fixture_options(), kw, cache, t);
  CHECK(r.works.size() == 6);
  CHECK_FALSE(r.complete);
  bool saw_not_found = false, saw_transient = false;
  for (const auto& s : r.skips.records()) {
    saw_not_found |= s == SkipRecord{"10.1109/cvpr.2019.00002", "fetch", "not_found"};
    saw_transient |= s == SkipRecord{"10.1109/cvpr.2019.00003", "fetch", "transient"};
  }
  CHECK(saw_not_found);
  CHECK(saw_transient);
}

TEST_CASE("missing listings are recorded") {
  FakeTransport t;
  auto o = fixture_options();
  o.start_year = 2018;
  serve_selected(t);
  IndustryKeywordList kw({"google"});
  ResponseCache cache;
  auto r = run_harvest(o, kw, cache, t);
  CHECK(r.listings_read == 1);
  CHECK(r.skips.records().front() == SkipRecord{"", "listing", "listing_missing:CVPR-2018"});

  SUBCASE("fetched listings use the url template") {
    FakeTransport net;
    net.on("https://dblp.test/cvpr/2018.xml", 404);
    net.on("https://dblp.test/cvpr/2019.xml", 200,
           smtest::slurp(smtest::fixture("dblp/CVPR-2019.xml")));
    serve_selected(net);
    auto o2 = fixture_options();
    o2.start_year = 2018;
    o2.listing_dir.reset();
    o2.listing_url_template = "https://dblp.test/{venue}/{year}.xml";
    ResponseCache cache2;
    auto r2 = run_harvest(o2, kw, cache2, net);
    CHECK(r2.listings_read == 1);
    CHECK(r2.dois_selected == 7);
    CHECK(r2.skips.records().front() == SkipRecord{"", "listing", "listing_not_found:CVPR-2018"});
  }
}

TEST_CASE("unknown venue") {
  FakeTransport t;
  auto o = fixture_options();
  o.venues = {"KDD"};
  IndustryKeywordList kw({"google"});
  ResponseCache cache;
  CHECK_THROWS_AS(run_harvest(o, kw, cache, t), Error);
}
