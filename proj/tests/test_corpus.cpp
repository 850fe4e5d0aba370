#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "scholarmetrics/corpus_io.hpp"
#include "scholarmetrics/error.hpp"
#include "support.hpp"

using namespace scholarmetrics;
using smtest::work;

TEST_CASE("subfields partition the thirteen venues") {
  std::set<std::string_view> seen;
  std::size_t total = 0;
  for (Subfield s : kAllSubfields) {
    for (auto v : venues_of(s)) {
      CHECK(seen.insert(v).second);
      CHECK(subfield_for_venue(v) == s);
      ++total;
    }
  }
  CHECK(total == 13);
  CHECK(all_venue_keys().size() == 13);
  CHECK(venues_of(Subfield::AI).size() == 2);
  CHECK(venues_of(Subfield::CV).size() == 3);
  CHECK(venues_of(Subfield::ML).size() == 3);
  CHECK(venues_of(Subfield::NLP).size() == 3);
  CHECK(venues_of(Subfield::WebIR).size() == 2);
  CHECK(subfield_for_venue("nips") == Subfield::ML);
  CHECK(subfield_for_venue("sigir") == Subfield::WebIR);
  CHECK_FALSE(subfield_for_venue("KDD"));
  CHECK(parse_subfield("Web&IR") == Subfield::WebIR);
  CHECK(parse_subfield("nlp") == Subfield::NLP);
  CHECK_FALSE(parse_subfield("Robotics"));
}

TEST_CASE("window partition") {
  auto w = make_window_partition(2000, 2024, 5);
  REQUIRE(w.size() == 5);
  CHECK(w[0] == TimeWindow{2000, 2004});
  CHECK(w[2] == TimeWindow{2010, 2014});
  CHECK(w[4] == TimeWindow{2020, 2024});

  auto single = make_window_partition(2000, 2000, 5);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == TimeWindow{2000, 2000});

  auto trunc = make_window_partition(2000, 2023, 5);
  REQUIRE(trunc.size() == 5);
  CHECK(trunc.back() == TimeWindow{2020, 2023});

  CHECK_THROWS_AS(make_window_partition(2000, 2024, 0), Error);
  CHECK_THROWS_AS(make_window_partition(2010, 2000, 5), Error);
  CHECK(w[1].label() == "2005-2009");
  CHECK(parse_window_label("2005-2009") == TimeWindow{2005, 2009});
  CHECK_FALSE(parse_window_label("2005"));
}

TEST_CASE("assign_window") {
  auto part = make_window_partition(2000, 2024, 5);
  auto at = [&](const char* d) {
    WorkRecord w;
    w.work_id = "W1";
    w.pub_date = smtest::date(d);
    return assign_window(w, part);
  };
  CHECK(at("2012-07-01") == TimeWindow{2010, 2014});
  CHECK_FALSE(at("1999-12-31"));
  CHECK(at("2024-12-31") == TimeWindow{2020, 2024});
  WorkRecord undated;
  CHECK_FALSE(assign_window(undated, part));
}

TEST_CASE("dates") {
  CHECK(parse_date("2021-02-28"));
  CHECK_FALSE(parse_date("2021-02-30"));
  CHECK_FALSE(parse_date("2021-2-3"));
  CHECK_FALSE(parse_date(""));
  CHECK(format_date(*parse_date("2004-01-09")) == "2004-01-09");
  CHECK(days_between(*parse_date("2020-01-01"), *parse_date("2020-03-01")) == 60);
  CHECK(days_between(*parse_date("2020-03-01"), *parse_date("2020-01-01")) == -60);
}

TEST_CASE("doi normalization") {
  CHECK(normalize_doi("https://doi.org/10.1109/CVPR.2019.00001") == "10.1109/cvpr.2019.00001");
  CHECK(normalize_doi("  doi:10.5555/ABC ") == "10.5555/abc");
  CHECK(normalize_doi("http://dx.doi.org/10.1/X") == "10.1/x");
  CHECK(normalize_doi("10.1/already") == "10.1/already");
}

TEST_CASE("subfield assignment is a pure function of the venue") {
  WorkRecord w;
  w.venue_key = "EMNLP";
  assign_subfield(w);
  CHECK(w.subfield == Subfield::NLP);
  assign_subfield(w);
  CHECK(w.subfield == Subfield::NLP);
  w.venue_key = "unknown-venue";
  assign_subfield(w);
  CHECK_FALSE(w.subfield);
}

TEST_CASE("corpus invariants") {
  auto part = make_window_partition(2000, 2024, 5);
  SUBCASE("duplicate doi") {
    auto a = work("W1", Subfield::AI, "2001-01-01");
    auto b = work("W2", Subfield::AI, "2001-01-01");
    b.doi = a.doi;
    CHECK_THROWS_AS(Corpus({a, b}, part), Error);
  }
  SUBCASE("duplicate id") {
    auto a = work("W1", Subfield::AI, "2001-01-01");
    auto b = work("W1", Subfield::CV, "2001-01-01");
    b.doi = "10.1/other";
    CHECK_THROWS_AS(Corpus({a, b}, part), Error);
  }
  SUBCASE("two primary topics") {
    auto a = work("W1", Subfield::AI, "2001-01-01");
    a.topics = {{"X", true}, {"Y", true}};
    CHECK_THROWS_AS(Corpus({a}, part), Error);
  }
  SUBCASE("more events than citations") {
    auto a = work("W1", Subfield::AI, "2001-01-01", {}, 0);
    a.citer_events.push_back({"C1", smtest::date("2001-02-01")});
    CHECK_THROWS_AS(Corpus({a}, part), Error);
  }
  SUBCASE("overlapping windows") {
    std::vector<TimeWindow> bad{{2000, 2004}, {2004, 2008}};
    CHECK_THROWS_AS(Corpus({}, bad), Error);
  }
}

TEST_CASE("corpus indexes authors and filters targets") {
  auto a = work("W1", Subfield::AI, "2001-05-01", {{"A1"}, {"A2"}}, 4);
  auto b = work("W2", Subfield::CV, "2011-05-01", {{"A1"}}, 1);
  auto n = smtest::neighbor("R1", "Physics");
  n.authorships.push_back({});
  n.authorships.back().author_id = "A1";
  auto c = smtest::corpus_of({a, b, n});

  REQUIRE(c.find_author("A1"));
  CHECK(c.find_author("A1")->work_ids == std::vector<std::string>{"R1", "W1", "W2"});
  CHECK(c.find_author("A2")->work_ids == std::vector<std::string>{"W1"});
  CHECK_FALSE(c.find_author("A9"));
  CHECK(c.targets(std::nullopt, std::nullopt).size() == 2);
  CHECK(c.targets(Subfield::AI, std::nullopt).size() == 1);
  CHECK(c.targets(std::nullopt, TimeWindow{2010, 2014}).size() == 1);
  CHECK(c.works_of("A1", TimeWindow{2010, 2014}).size() == 2);
  CHECK(c.works_of("A1", std::nullopt).size() == 3);
}

TEST_CASE("partition completeness") {
  std::vector<WorkRecord> works;
  works.push_back(work("W1", Subfield::AI, "1998-01-01"));
  works.push_back(work("W2", Subfield::AI, "2003-01-01"));
  works.push_back(work("W3", Subfield::ML, "2024-12-31"));
  works.push_back(work("W4", Subfield::ML, "2030-06-01"));
  auto c = smtest::corpus_of(works);
  std::size_t in_windows = 0;
  for (const auto& w : c.windows()) in_windows += c.targets(std::nullopt, w).size();
  std::size_t outside = 0;
  for (const auto& w : c.works()) outside += assign_window(w, c.windows()) ? 0 : 1;
  CHECK(in_windows + outside == c.size());
}

TEST_CASE("yearly counts") {
  SUBCASE("one work, three authors, no citers") {
    auto c = smtest::corpus_of({work("W1", Subfield::NLP, "2007-03-03", {{"a"}, {"b"}, {"c"}})});
    auto rows = yearly_counts(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].year == 2007);
    CHECK(rows[0].subfield == Subfield::NLP);
    CHECK(rows[0].n_papers == 1);
    CHECK(rows[0].n_distinct_authors == 3);
    CHECK(rows[0].n_citations_received == 0);
  }
  SUBCASE("shared author counted once") {
    auto c = smtest::corpus_of({work("W1", Subfield::AI, "2010-01-01", {{"a"}, {"b"}}),
                                work("W2", Subfield::AI, "2010-06-01", {{"b"}, {"c"}, {"d"}})});
    auto rows = yearly_counts(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_papers == 2);
    CHECK(rows[0].n_distinct_authors == 4);
  }
  SUBCASE("sparse rows and totals") {
    auto w1 = work("W1", Subfield::AI, "2010-01-01", {}, 3);
    w1.citer_events = {{"C1", smtest::date("2011-01-01")}, {"C2", smtest::date("2012-01-01")}};
    auto c = smtest::corpus_of({w1, work("W2", Subfield::CV, "2012-01-01"),
                                work("W3", Subfield::CV, "2012-05-01")});
    auto rows = yearly_counts(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].subfield == Subfield::AI);
    CHECK(rows[0].n_citations_received == 2);
    std::uint64_t total = 0;
    for (const auto& r : rows) total += r.n_papers;
    CHECK(total == c.size());
    for (const auto& r : rows) CHECK(r.subfield != Subfield::ML);
  }
}

TEST_CASE("json lines round trip") {
  auto w = work("W1", Subfield::CV, "2019-06-16", {{"A1", "US", true, "Google, CA"}}, 2);
  w.topics = {{"Computer Vision and Pattern Recognition", true}, {"Artificial Intelligence", false}};
  w.referenced_ids = {"R1", "R2"};
  w.citer_events = {{"C1", smtest::date("2019-07-01")}};
  w.authorships[0].institutions = {"Google (United States)"};
  std::string line = work_to_json_line(w);
  CHECK(line.find('\n') == std::string::npos);
  WorkRecord back = work_from_json_line(line);
  CHECK(work_to_json_line(back) == line);
  CHECK(back.authorships[0].is_industry);
  CHECK(back.citer_events[0].date == smtest::date("2019-07-01"));
  CHECK(back.subfield == Subfield::CV);

  SUBCASE("unknown fields tolerated, defaults applied") {
    auto min = work_from_json_line(R"({"work_id":"W9","extra":{"x":1},"role":"citer"})");
    CHECK(min.work_id == "W9");
    CHECK(min.role == WorkRole::Citer);
    CHECK(min.citation_count == 0);
    CHECK_FALSE(min.pub_date);
  }
  SUBCASE("malformed line") {
    CHECK_THROWS_AS(work_from_json_line("{not json"), Error);
  }
}

TEST_CASE("corpus file and manifest") {
  auto dir = std::filesystem::temp_directory_path() / "sm_test_corpus";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto c = smtest::corpus_of({work("W1", Subfield::AI, "2001-01-01", {{"A"}}),
                              work("W2", Subfield::ML, "2021-01-01", {{"A"}, {"B"}})},
                             2000, 2024, 5);
  save_corpus(dir / "c.jsonl", c, {{"keyword_hash", "abc"}});
  CHECK(std::filesystem::exists(manifest_path_for(dir / "c.jsonl")));
  auto back = load_corpus(dir / "c.jsonl");
  CHECK(back.size() == 2);
  CHECK(back.windows().size() == 5);
  CHECK(back.provenance() == "test");
  CHECK(read_manifest(manifest_path_for(dir / "c.jsonl")).attributes.at("keyword_hash") == "abc");
  CHECK_THROWS_AS(load_corpus(dir / "missing.jsonl"), Error);
  std::filesystem::remove_all(dir);
}
