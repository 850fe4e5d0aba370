#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "scholarmetrics/error.hpp"
#include "scholarmetrics/impact.hpp"
#include "support.hpp"

using namespace scholarmetrics;
using namespace scholarmetrics::impact;
using smtest::work;

namespace {

std::vector<std::uint64_t> u64(std::initializer_list<std::uint64_t> xs) { return xs; }

/// A target work whose k-th citation (1-based) arrives `day_of(k)` days after 2020-01-01.
WorkRecord timed_work(std::string id, std::size_t n_events, std::int64_t days_to_last,
                      std::uint64_t citations = 0) {
  auto w = work(std::move(id), Subfield::AI, "2020-01-01", {}, std::max<std::uint64_t>(citations, n_events));
  const auto base = std::chrono::sys_days(*w.pub_date);
  for (std::size_t k = 1; k <= n_events; ++k) {
    auto d = static_cast<std::int64_t>(k) * days_to_last / static_cast<std::int64_t>(n_events);
    w.citer_events.push_back({"C" + std::to_string(k), Date{base + std::chrono::days(d)}});
  }
  return w;
}

}  // namespace

TEST_CASE("h-index") {
  CHECK(h_index(u64({})) == 0);
  CHECK(h_index(u64({10, 8, 5, 4, 3})) == 4);
  CHECK(h_index(u64({1, 1, 1, 1})) == 1);
  CHECK(h_index(u64({0, 0})) == 0);
  CHECK(h_index(u64({100})) == 1);
  CHECK(h_index(u64({3, 3, 3})) == 3);
}

TEST_CASE("power-law fit on exact input") {
  std::vector<double> y;
  for (int x = 1; x <= 50; ++x) y.push_back(100.0 * std::pow(x, -1.0));
  std::shuffle(y.begin(), y.end(), std::mt19937_64(7));
  auto fit = fit_power_law(std::span<const double>(y));
  CHECK(fit.C == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(fit.alpha == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(fit.r2);
  CHECK(*fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.n_points == 50);
}

TEST_CASE("power-law fit degenerate and error cases") {
  std::vector<std::uint64_t> flat(10, 7);
  auto fit = fit_power_law(std::span<const std::uint64_t>(flat));
  CHECK(fit.alpha == doctest::Approx(0.0));
  CHECK_FALSE(fit.r2);
  CHECK(fit.C == doctest::Approx(7.0));

  CHECK_THROWS_AS(fit_power_law(u64({5, 0, 0})), Error);
  CHECK_THROWS_AS(fit_power_law(u64({})), Error);
  auto zeros_dropped = fit_power_law(u64({8, 4, 0, 0}));
  CHECK(zeros_dropped.n_points == 2);
  CHECK(zeros_dropped.alpha == doctest::Approx(1.0));
}

TEST_CASE("power-law fit on noisy input") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> noise(0.9, 1.1);
  std::vector<double> y;
  for (int x = 1; x <= 200; ++x) y.push_back(500.0 * std::pow(x, -1.5) * noise(rng));
  auto fit = fit_power_law(std::span<const double>(y));
  CHECK(std::abs(fit.alpha - 1.5) <= 0.1);
}

TEST_CASE("power-law fit is scale covariant") {
  std::vector<double> y{90, 41, 33, 12, 9, 4, 4, 2, 1};
  auto base = fit_power_law(std::span<const double>(y));
  std::vector<double> scaled = y;
  for (auto& v : scaled) v *= 8.0;
  auto s = fit_power_law(std::span<const double>(scaled));
  CHECK(s.C == doctest::Approx(base.C * 8.0).epsilon(1e-12));
  CHECK(s.alpha == doctest::Approx(base.alpha).epsilon(1e-12));
  CHECK(*s.r2 == doctest::Approx(*base.r2).epsilon(1e-12));
}

TEST_CASE("days to n citations") {
  auto w = timed_work("W1", 25, 59);
  CHECK(days_to_n_citations(w, 25) == 59);
  CHECK(citation_velocity(25, 59) == doctest::Approx(154.767).epsilon(1e-5));

  auto fast = timed_work("W2", 25, 1);
  CHECK(days_to_n_citations(fast, 25) == 1);
  CHECK(citation_velocity(25, 1) == 9131.25);

  CHECK_FALSE(days_to_n_citations(timed_work("W3", 10, 100), 25));

  SUBCASE("events out of order and before publication") {
    auto pre = work("W4", Subfield::AI, "2020-01-10", {}, 3);
    pre.citer_events = {{"C1", smtest::date("2020-03-01")},
                        {"C2", smtest::date("2019-12-01")},
                        {"C3", smtest::date("2020-01-05")}};
    CHECK(days_to_n_citations(pre, 1) == 1);  // clamped
    CHECK(days_to_n_citations(pre, 2) == 1);
    CHECK(days_to_n_citations(pre, 3) == 51);
  }
  SUBCASE("undated work") {
    auto undated = timed_work("W5", 25, 30);
    undated.pub_date.reset();
    CHECK_FALSE(days_to_n_citations(undated, 25));
  }
  auto rec = velocity_record(w, 25);
  REQUIRE(rec);
  CHECK(rec->days_to_threshold == 59);
  CHECK(rec->velocity == doctest::Approx(25 * 365.25 / 59));
}

TEST_CASE("velocity distribution cohorts") {
  std::vector<WorkRecord> ws{timed_work("W1", 25, 59), timed_work("W2", 25, 74),
                             timed_work("W3", 25, 84), timed_work("W4", 10, 20),
                             timed_work("W5", 3, 20)};
  auto c = smtest::corpus_of(ws);
  auto days = velocity_distribution(c, {2020, 2024}, Subfield::AI, 25, Cohort::AllReachingN);
  std::sort(days.begin(), days.end());
  CHECK(days == std::vector<std::int64_t>{59, 74, 84});
  CHECK(velocity_distribution(c, {2015, 2019}, Subfield::AI, 25, Cohort::AllReachingN).empty());

  auto single = smtest::corpus_of({timed_work("W1", 25, 59)});
  CHECK(velocity_distribution(single, {2020, 2024}, Subfield::AI, 25, Cohort::AllReachingN).size() ==
        1);
}

TEST_CASE("top-cited cohort includes ties at the cutoff") {
  std::vector<WorkRecord> ws;
  for (int i = 0; i < 10; ++i) ws.push_back(work("W" + std::to_string(i), Subfield::AI, "2020-01-01", {}, 10 + i));
  auto c = smtest::corpus_of(ws);
  auto scope = c.targets(Subfield::AI, std::nullopt);
  CHECK(top_cited(scope, 20).size() == 2);

  ws[7].citation_count = 18;  // now 19, 18, 18 at the top
  auto tied = smtest::corpus_of(ws);
  CHECK(top_cited(tied.targets(Subfield::AI, std::nullopt), 20).size() == 3);

  CHECK(top_cited(scope, 100).size() == 10);
  CHECK(top_cited(std::span<const WorkRecord* const>(scope).subspan(0, 1), 20).size() == 1);
  CHECK_THROWS_AS(top_cited(scope, 0), Error);
}

TEST_CASE("shannon entropy") {
  std::vector<double> point{1, 0, 0};
  CHECK(shannon_entropy(point) == 0.0);
  std::vector<double> uniform(4, 0.25);
  CHECK(shannon_entropy(uniform) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  std::vector<double> p{0.5, 0.25, 0.25};
  CHECK(shannon_entropy(p) == doctest::Approx(1.039721).epsilon(1e-6));
  std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(shannon_entropy(bad), Error);
  std::vector<double> negative{1.5, -0.5};
  CHECK_THROWS_AS(shannon_entropy(negative), Error);
  std::vector<double> permuted{0.25, 0.5, 0.25};
  CHECK(shannon_entropy(permuted) == doctest::Approx(shannon_entropy(p)).epsilon(1e-15));
}

TEST_CASE("work interdisciplinarity") {
  auto target = work("T", Subfield::ML, "2015-01-01", {}, 2);
  std::vector<WorkRecord> ws;
  SUBCASE("one discipline") {
    for (int i = 0; i < 4; ++i) {
      ws.push_back(smtest::neighbor("R" + std::to_string(i), "Physics"));
      target.referenced_ids.push_back("R" + std::to_string(i));
    }
    ws.push_back(target);
    auto c = smtest::corpus_of(ws);
    CHECK(work_interdisciplinarity(*c.find_work("T"), c, Direction::Cited) == 0.0);
    CHECK_FALSE(work_interdisciplinarity(*c.find_work("T"), c, Direction::Citing));
  }
  SUBCASE("four disciplines") {
    for (const char* d : {"A", "B", "C", "D"}) {
      ws.push_back(smtest::neighbor(std::string("R") + d, d));
      target.referenced_ids.push_back(std::string("R") + d);
    }
    ws.push_back(target);
    auto c = smtest::corpus_of(ws);
    CHECK(*work_interdisciplinarity(*c.find_work("T"), c, Direction::Cited) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
  }
  SUBCASE("counts 2, 1, 1 across citers; unresolved neighbors ignored") {
    int k = 0;
    for (const char* d : {"A", "A", "B", "C"}) {
      std::string id = "C" + std::to_string(k++);
      ws.push_back(smtest::neighbor(id, d, WorkRole::Citer));
      target.citer_events.push_back({id, smtest::date("2016-01-01")});
    }
    target.citation_count = 5;
    target.citer_events.push_back({"missing", smtest::date("2016-01-01")});
    ws.push_back(smtest::neighbor("untopical", ""));
    target.referenced_ids.push_back("untopical");
    ws.push_back(target);
    auto c = smtest::corpus_of(ws);
    CHECK(*work_interdisciplinarity(*c.find_work("T"), c, Direction::Citing) ==
          doctest::Approx(1.039721).epsilon(1e-6));
    auto counts = neighbor_disciplines(*c.find_work("T"), c, Direction::Citing);
    CHECK(counts == std::map<std::string, std::uint64_t>{{"A", 2}, {"B", 1}, {"C", 1}});
    CHECK_FALSE(work_interdisciplinarity(*c.find_work("T"), c, Direction::Cited));
  }
}

TEST_CASE("observed-expected flows") {
  SUBCASE("one subfield saturates the null model") {
    std::vector<WorkRecord> ws;
    for (int i = 0; i < 5; ++i) ws.push_back(work("W" + std::to_string(i), Subfield::AI, "2010-01-01"));
    ws[0].referenced_ids = {"W1", "W2"};
    ws[3].referenced_ids = {"W4"};
    auto c = smtest::corpus_of(ws);
    const Subfield only[] = {Subfield::AI};
    auto m = observed_expected_matrix(c, std::nullopt, only);
    CHECK(m.total_papers == 5);
    CHECK(m.total_citations == 3.0);
    CHECK(m.expected[0][0] == doctest::Approx(3.0));
    CHECK(*m.ratio[0][0] == doctest::Approx(1.0));
  }
  SUBCASE("two equal subfields, internal citations split equally") {
    std::vector<WorkRecord> ws;
    for (int i = 0; i < 4; ++i) ws.push_back(work("A" + std::to_string(i), Subfield::AI, "2010-01-01"));
    for (int i = 0; i < 4; ++i) ws.push_back(work("C" + std::to_string(i), Subfield::CV, "2010-01-01"));
    ws[0].referenced_ids = {"A1", "A2"};
    ws[4].referenced_ids = {"C1"};
    // The same edge seen again through the citer events counts once.
    ws[5].citation_count = 1;
    ws[5].citer_events = {{"C0", smtest::date("2011-01-01")}};
    ws[6].citation_count = 1;
    ws[6].citer_events = {{"C3", smtest::date("2011-01-01")}};
    auto c = smtest::corpus_of(ws);
    const Subfield two[] = {Subfield::AI, Subfield::CV};
    auto m = observed_expected_matrix(c, std::nullopt, two);
    CHECK(m.total_citations == 4.0);
    CHECK(m.observed[0][0] == 2.0);
    CHECK(m.observed[1][1] == 2.0);
    CHECK(*m.ratio[0][0] == doctest::Approx(2.0));
    CHECK(*m.ratio[1][1] == doctest::Approx(2.0));
    CHECK(*m.ratio[0][1] == 0.0);
    CHECK(*m.ratio[1][0] == 0.0);
    double e = 0;
    for (auto& row : m.expected)
      for (double v : row) e += v;
    CHECK(e == doctest::Approx(m.total_citations).epsilon(1e-12));
  }
  SUBCASE("window scope and empty input") {
    std::vector<WorkRecord> ws{work("A", Subfield::AI, "2001-01-01"), work("B", Subfield::AI, "2011-01-01")};
    ws[1].referenced_ids = {"A"};
    auto c = smtest::corpus_of(ws);
    CHECK_THROWS_AS(observed_expected_matrix(c, TimeWindow{2010, 2014}), Error);
    CHECK(observed_expected_matrix(c, std::nullopt).total_citations == 1.0);
  }
  SUBCASE("make_flow_matrix flags undefined ratios") {
    auto m = make_flow_matrix({Subfield::AI, Subfield::CV}, {3, 0}, {{2.0, 0.0}, {0.0, 0.0}});
    CHECK(m.ratio[0][0].has_value());
    CHECK_FALSE(m.ratio[0][1].has_value());
    CHECK_FALSE(m.ratio[1][1].has_value());
    CHECK_THROWS_AS(make_flow_matrix({Subfield::AI}, {0}, {{0.0}}), Error);
    CHECK_THROWS_AS(make_flow_matrix({Subfield::AI}, {4}, {{0.0}}), Error);
  }
  SUBCASE("observed equal to expected gives unit ratios") {
    auto m = make_flow_matrix({Subfield::AI, Subfield::CV}, {1, 3}, {{1.0, 3.0}, {3.0, 9.0}});
    for (auto& row : m.ratio)
      for (auto& r : row) CHECK(*r == doctest::Approx(1.0).epsilon(1e-12));
  }
}
