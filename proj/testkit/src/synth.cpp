#include "scholarmetrics/testkit/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include <fmt/format.h>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::testkit {

namespace {

constexpr std::string_view kIndustryOrgs[] = {
    "Google Research", "Microsoft Research", "Meta AI", "IBM Research", "Baidu Research",
    "Alibaba Group",   "Amazon",             "NVIDIA",  "Tencent AI Lab", "Huawei Noah's Ark Lab",
};

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("{} must be within [0, 1]", name));
  }
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool chance(double p) { return uniform() < p; }
  template <class It>
  void shuffle(It first, It last) {
    std::shuffle(first, last, engine_);
  }

 private:
  std::mt19937_64 engine_;
};

struct SynthAuthor {
  std::string id;
  std::string name;
  std::string country;
  std::size_t discipline = 0;
};

Date add_days(const Date& d, std::int64_t days) {
  return Date{std::chrono::sys_days(d) + std::chrono::days(days)};
}

Date random_date(Rng& rng, int year) {
  return Date{std::chrono::year(year), std::chrono::month(static_cast<unsigned>(rng.integer(1, 12))),
              std::chrono::day(static_cast<unsigned>(rng.integer(1, 28)))};
}

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, m); };
  if (subfields.empty()) fail("at least one subfield is required");
  if (!(alpha > 0.0)) fail("alpha must be > 0");
  if (!(tail_citations > 0.0)) fail("tail_citations must be > 0");
  if (!(median_days_to_25 >= 1.0)) fail("median_days_to_25 must be >= 1");
  if (!(days_spread >= 1.0)) fail("days_spread must be >= 1");
  check_probability(industry_probability, "industry_probability");
  check_probability(inter_clique_probability, "inter_clique_probability");
  check_probability(topic_stickiness, "topic_stickiness");
  check_probability(internal_reference_share, "internal_reference_share");
  if (country_mixture.empty()) fail("country_mixture must not be empty");
  double total = 0.0;
  for (const auto& [code, p] : country_mixture) {
    check_probability(p, "country mixture weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) fail("country mixture weights must sum to 1");
  if (clique_size < 1) fail("clique_size must be >= 1");
  if (clique_size > authors_per_subfield) fail("clique larger than the author pool");
  if (min_authors_per_work < 1 || min_authors_per_work > max_authors_per_work) {
    fail("author count range is empty");
  }
  if (disciplines.empty()) fail("disciplines must not be empty");
  if (neighbor_pool < 1) fail("neighbor_pool must be >= 1");
  if (works_per_cell < 1) fail("works_per_cell must be >= 1");
}

Corpus generate_corpus(const SynthSpec& spec) {
  spec.validate();
  const auto windows = make_window_partition(spec.start_year, spec.end_year, spec.window_width);
  Rng rng(spec.seed);

  std::vector<WorkRecord> works;
  std::size_t next_id = 1;
  auto new_id = [&] { return fmt::format("W{:07}", next_id++); };

  // Reference/citer neighbors: no authors, one primary discipline each.
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < spec.neighbor_pool; ++i) {
    WorkRecord w;
    w.work_id = new_id();
    w.title = fmt::format("Neighbor {}", i);
    w.role = i % 2 == 0 ? WorkRole::Reference : WorkRole::Citer;
    w.pub_date = random_date(rng, rng.integer(spec.start_year, spec.end_year));
    w.topics.push_back({spec.disciplines[rng.index(spec.disciplines.size())], true});
    pool.push_back(w.work_id);
    works.push_back(std::move(w));
  }

  std::vector<std::string> targets;
  for (std::size_t si = 0; si < spec.subfields.size(); ++si) {
    const Subfield subfield = spec.subfields[si];
    const auto venues = venues_of(subfield);

    std::vector<SynthAuthor> people(spec.authors_per_subfield);
    for (std::size_t i = 0; i < people.size(); ++i) {
      auto& a = people[i];
      a.id = fmt::format("A{}-{:04}", si, i);
      a.name = fmt::format("Author {}-{}", si, i);
      double u = rng.uniform();
      a.country = spec.country_mixture.back().first;
      for (const auto& [code, p] : spec.country_mixture) {
        if (u < p) {
          a.country = code;
          break;
        }
        u -= p;
      }
      a.discipline = rng.index(spec.disciplines.size());
    }
    const std::size_t n_cliques =
        (people.size() + spec.clique_size - 1) / spec.clique_size;

    const std::size_t n_works = spec.works_per_cell * windows.size();
    std::vector<std::size_t> ranks(n_works);
    for (std::size_t i = 0; i < n_works; ++i) ranks[i] = i + 1;
    rng.shuffle(ranks.begin(), ranks.end());
    const double scale = spec.tail_citations * std::pow(static_cast<double>(n_works), spec.alpha);

    std::size_t k = 0;
    for (const auto& window : windows) {
      for (std::size_t c = 0; c < spec.works_per_cell; ++c, ++k) {
        WorkRecord w;
        w.work_id = new_id();
        w.doi = fmt::format("10.5555/synth.{}.{}", si, k);
        w.title = fmt::format("Synthetic {} paper {}", to_string(subfield), k);
        w.venue_key = std::string(venues[rng.index(venues.size())]);
        w.subfield = subfield;
        w.role = WorkRole::Target;
        w.pub_date = random_date(rng, rng.integer(window.start_year, window.end_year));

        // Authors: mostly one clique, occasionally an outsider.
        const std::size_t clique = rng.index(n_cliques);
        const std::size_t lo = clique * spec.clique_size;
        const std::size_t hi = std::min(people.size(), lo + spec.clique_size);
        std::vector<std::size_t> members;
        for (std::size_t i = lo; i < hi; ++i) members.push_back(i);
        rng.shuffle(members.begin(), members.end());
        const auto want = static_cast<std::size_t>(rng.integer(
            static_cast<int>(spec.min_authors_per_work), static_cast<int>(spec.max_authors_per_work)));
        members.resize(std::min(want, members.size()));
        if (people.size() > hi - lo && rng.chance(spec.inter_clique_probability)) {
          std::size_t outsider;
          do {
            outsider = rng.index(people.size());
          } while (outsider >= lo && outsider < hi);
          if (members.size() < want) {
            members.push_back(outsider);
          } else {
            members.back() = outsider;
          }
        }
        for (std::size_t idx : members) {
          const auto& person = people[idx];
          Authorship a;
          a.author_id = person.id;
          a.author_name = person.name;
          a.country_code = person.country;
          a.is_industry = rng.chance(spec.industry_probability);
          std::string org = a.is_industry
                                ? std::string(kIndustryOrgs[rng.index(std::size(kIndustryOrgs))])
                                : fmt::format("University of {}", person.country);
          a.raw_affiliation = org + ", Research Campus";
          a.institutions = {org};
          w.authorships.push_back(std::move(a));
        }

        const std::size_t home = people[members.front()].discipline;
        const std::size_t topic =
            rng.chance(spec.topic_stickiness) ? home : rng.index(spec.disciplines.size());
        w.topics.push_back({spec.disciplines[topic], true});

        std::set<std::string> refs;
        for (std::size_t r = 0; r < spec.references_per_work; ++r) {
          if (!targets.empty() && rng.chance(spec.internal_reference_share)) {
            refs.insert(targets[rng.index(targets.size())]);
          } else {
            refs.insert(pool[rng.index(pool.size())]);
          }
        }
        w.referenced_ids.assign(refs.begin(), refs.end());

        const double y = scale * std::pow(static_cast<double>(ranks[k]), -spec.alpha) *
                         rng.uniform(0.9, 1.1);
        w.citation_count = static_cast<std::uint64_t>(std::llround(y));

        const std::size_t n_events =
            std::min({static_cast<std::size_t>(w.citation_count), spec.max_citer_events, pool.size()});
        const double days_to_25 =
            spec.median_days_to_25 * std::pow(spec.days_spread, rng.uniform(-1.0, 1.0));
        std::vector<std::size_t> citers(pool.size());
        for (std::size_t i = 0; i < citers.size(); ++i) citers[i] = i;
        rng.shuffle(citers.begin(), citers.end());
        for (std::size_t e = 0; e < n_events; ++e) {
          const auto day = static_cast<std::int64_t>(
              std::llround(days_to_25 * static_cast<double>(e + 1) / 25.0));
          w.citer_events.push_back({pool[citers[e]], add_days(*w.pub_date, day)});
        }

        targets.push_back(w.work_id);
        works.push_back(std::move(w));
      }
    }
  }
  return Corpus(std::move(works), windows, fmt::format("synthetic seed={}", spec.seed));
}

}  // namespace scholarmetrics::testkit
