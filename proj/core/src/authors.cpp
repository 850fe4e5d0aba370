#include "scholarmetrics/authors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scholarmetrics/collab.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/impact.hpp"

namespace scholarmetrics::authors {

std::uint64_t author_h_index(const Corpus& corpus, std::string_view author_id) {
  if (!corpus.find_author(author_id)) {
    throw Error(ErrorKind::NotFound, "unknown author: " + std::string(author_id));
  }
  std::vector<std::uint64_t> counts;
  for (const auto* w : corpus.works_of(author_id, std::nullopt)) counts.push_back(w->citation_count);
  return impact::h_index(counts);
}

TopicDistribution topic_distribution(const Corpus& corpus, std::string_view author_id,
                                     const TimeWindow& window, std::optional<Subfield> subfield) {
  TopicDistribution td;
  td.author_id = std::string(author_id);
  td.window = window;
  std::map<std::string, std::uint64_t> counts;
  for (const auto* w : corpus.works_of(author_id, window)) {
    if (subfield && (w->role != WorkRole::Target || w->subfield != subfield)) continue;
    if (const std::string* d = w->primary_discipline()) {
      ++counts[*d];
      ++td.support_count;
    }
  }
  for (const auto& [d, c] : counts) {
    td.proportions[d] = static_cast<double>(c) / static_cast<double>(td.support_count);
  }
  return td;
}

namespace {

void check_distribution(const Distribution& d, const char* name) {
  double sum = 0.0;
  for (const auto& [_, p] : d) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::InvalidDistribution,
                  std::string(name) + " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorKind::InvalidDistribution, std::string(name) + " does not sum to 1");
  }
}

double kl_term(double a, double m) { return a > 0.0 ? a * std::log(a / m) : 0.0; }

}  // namespace

double js_divergence(const Distribution& p, const Distribution& q, double log_base) {
  if (!(log_base > 1.0)) throw Error(ErrorKind::InvalidArgument, "log base must be > 1");
  check_distribution(p, "p");
  check_distribution(q, "q");
  double sum = 0.0;
  auto i = p.begin();
  auto j = q.begin();
  while (i != p.end() || j != q.end()) {
    double a = 0.0, b = 0.0;
    if (j == q.end() || (i != p.end() && i->first < j->first)) {
      a = (i++)->second;
    } else if (i == p.end() || j->first < i->first) {
      b = (j++)->second;
    } else {
      a = (i++)->second;
      b = (j++)->second;
    }
    const double m = 0.5 * (a + b);
    sum += 0.5 * kl_term(a, m) + 0.5 * kl_term(b, m);
  }
  const double upper = std::numbers::ln2 / std::log(log_base);
  return std::clamp(sum / std::log(log_base), 0.0, upper);
}

std::optional<double> author_mobility(const Corpus& corpus, std::string_view author_id,
                                      std::span<const TimeWindow> windows,
                                      std::optional<Subfield> subfield, double log_base) {
  std::vector<TopicDistribution> dists;
  dists.reserve(windows.size());
  for (const auto& w : windows) dists.push_back(topic_distribution(corpus, author_id, w, subfield));
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t + 1 < dists.size(); ++t) {
    if (dists[t].support_count == 0 || dists[t + 1].support_count == 0) continue;
    sum += js_divergence(dists[t].proportions, dists[t + 1].proportions, log_base);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

FieldMobility field_mobility(const Corpus& corpus, Subfield subfield, std::size_t top_k,
                             std::span<const TimeWindow> windows, double log_base) {
  auto selected = collab::select_top_authors(corpus, subfield, top_k);
  FieldMobility fm;
  fm.n_selected = selected.size();
  double sum = 0.0;
  for (const auto& id : selected) {
    if (auto m = author_mobility(corpus, id, windows, std::nullopt, log_base)) {
      fm.per_author.push_back(*m);
      sum += *m;
    }
  }
  if (fm.per_author.empty()) {
    throw Error(ErrorKind::InsufficientData,
                "no author with defined mobility in " + std::string(to_string(subfield)));
  }
  fm.mean = sum / static_cast<double>(fm.per_author.size());
  return fm;
}

std::optional<std::string> dominant_discipline(const Distribution& d) {
  const std::string* best = nullptr;
  double best_p = -1.0;
  bool tied = false;
  for (const auto& [name, p] : d) {
    if (p > best_p) {
      best = &name;
      best_p = p;
      tied = false;
    } else if (p == best_p) {
      tied = true;
    }
  }
  if (!best || tied) return std::nullopt;
  return *best;
}

std::map<std::pair<std::string, std::string>, std::uint64_t> transition_counts(
    const Corpus& corpus, std::span<const TimeWindow> windows,
    std::optional<std::span<const std::string>> authors) {
  std::vector<std::string> ids;
  if (authors) {
    ids.assign(authors->begin(), authors->end());
  } else {
    for (const auto& a : corpus.authors()) ids.push_back(a.author_id);
  }
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  for (const auto& id : ids) {
    std::optional<std::string> prev;
    for (std::size_t t = 0; t < windows.size(); ++t) {
      auto cur = dominant_discipline(topic_distribution(corpus, id, windows[t]).proportions);
      if (t > 0 && prev && cur && *prev != *cur) ++counts[{*prev, *cur}];
      prev = std::move(cur);
    }
  }
  return counts;
}

std::vector<MigrationFlow> rank_flows(
    const std::map<std::pair<std::string, std::string>, std::uint64_t>& transitions,
    std::size_t top_n) {
  std::vector<MigrationFlow> flows;
  flows.reserve(transitions.size());
  for (const auto& [key, count] : transitions) {
    std::uint64_t reverse = 0;
    if (auto it = transitions.find({key.second, key.first}); it != transitions.end()) {
      reverse = it->second;
    }
    flows.push_back({key.first, key.second, count,
                     static_cast<std::int64_t>(count) - static_cast<std::int64_t>(reverse)});
  }
  // transitions is ordered by (from, to), so a stable sort on count keeps that as tie order.
  std::stable_sort(flows.begin(), flows.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
  if (flows.size() > top_n) flows.resize(top_n);
  return flows;
}

std::vector<MigrationFlow> migration_flows(const Corpus& corpus,
                                           std::span<const TimeWindow> windows, std::size_t top_n,
                                           std::optional<std::span<const std::string>> authors) {
  return rank_flows(transition_counts(corpus, windows, authors), top_n);
}

}  // namespace scholarmetrics::authors
