#include "scholarmetrics/collab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::collab {

namespace {

std::map<std::string_view, std::uint64_t> country_histogram(const WorkRecord& work) {
  std::map<std::string_view, std::uint64_t> hist;
  for (const auto& a : work.authorships) {
    if (a.has_known_country()) ++hist[a.country_code];
  }
  return hist;
}

std::vector<const WorkRecord*> nonempty_scope(const Corpus& corpus, const TimeWindow& window,
                                              Subfield subfield) {
  auto scope = corpus.targets(subfield, window);
  if (scope.empty()) {
    throw Error(ErrorKind::InsufficientData,
                std::string("no works for ") + std::string(to_string(subfield)) + " in " +
                    window.label());
  }
  return scope;
}

}  // namespace

double collaboration_index(std::span<const WorkRecord* const> works) {
  if (works.empty()) throw Error(ErrorKind::InsufficientData, "no works in scope");
  std::map<std::size_t, std::uint64_t> freq;  // j -> f_j
  for (const auto* w : works) ++freq[w->authorships.size()];
  double weighted = 0.0;
  for (const auto& [j, f] : freq) weighted += static_cast<double>(j) * static_cast<double>(f);
  return weighted / static_cast<double>(works.size());
}

double collaboration_index(const Corpus& corpus, const TimeWindow& window, Subfield subfield) {
  return collaboration_index(nonempty_scope(corpus, window, subfield));
}

std::optional<double> international_pair_ratio(const WorkRecord& work) {
  auto hist = country_histogram(work);
  std::uint64_t n = 0, same = 0;
  for (const auto& [_, c] : hist) {
    n += c;
    same += c * (c - 1) / 2;
  }
  if (n < 2) return std::nullopt;
  const std::uint64_t pairs = n * (n - 1) / 2;
  return static_cast<double>(pairs - same) / static_cast<double>(pairs);
}

std::size_t distinct_countries(const WorkRecord& work) { return country_histogram(work).size(); }

InternationalRates international_rates(const Corpus& corpus, const TimeWindow& window,
                                       Subfield subfield) {
  auto scope = nonempty_scope(corpus, window, subfield);
  InternationalRates r;
  r.n_works = scope.size();
  std::size_t international = 0;
  double pair_sum = 0.0;
  for (const auto* w : scope) {
    if (distinct_countries(*w) >= 2) ++international;
    if (auto p = international_pair_ratio(*w)) {
      pair_sum += *p;
      ++r.n_pair_defined;
    }
  }
  r.simple_ratio = static_cast<double>(international) / static_cast<double>(scope.size());
  if (r.n_pair_defined > 0) r.pair_ratio_mean = pair_sum / static_cast<double>(r.n_pair_defined);
  return r;
}

std::uint64_t CountryPairMatrix::at(std::string_view a, std::string_view b) const {
  auto ia = std::lower_bound(countries.begin(), countries.end(), a);
  auto ib = std::lower_bound(countries.begin(), countries.end(), b);
  if (ia == countries.end() || *ia != a || ib == countries.end() || *ib != b) return 0;
  return counts[static_cast<std::size_t>(ia - countries.begin())]
               [static_cast<std::size_t>(ib - countries.begin())];
}

std::vector<std::uint64_t> CountryPairMatrix::totals() const {
  std::vector<std::uint64_t> out(countries.size(), 0);
  for (std::size_t i = 0; i < countries.size(); ++i) {
    for (auto c : counts[i]) out[i] += c;
  }
  return out;
}

std::uint64_t CountryPairMatrix::total_pairs() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < countries.size(); ++i) {
    for (std::size_t j = i + 1; j < countries.size(); ++j) total += counts[i][j];
  }
  return total;
}

CountryPairMatrix country_pair_matrix(std::span<const WorkRecord* const> works) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> cells;
  std::set<std::string> seen;
  for (const auto* w : works) {
    auto hist = country_histogram(*w);
    for (auto i = hist.begin(); i != hist.end(); ++i) {
      for (auto j = std::next(i); j != hist.end(); ++j) {
        cells[{std::string(i->first), std::string(j->first)}] += i->second * j->second;
        seen.emplace(i->first);
        seen.emplace(j->first);
      }
    }
  }
  CountryPairMatrix m;
  m.countries.assign(seen.begin(), seen.end());
  m.counts.assign(m.countries.size(), std::vector<std::uint64_t>(m.countries.size(), 0));
  auto index = [&](const std::string& c) {
    return static_cast<std::size_t>(std::lower_bound(m.countries.begin(), m.countries.end(), c) -
                                    m.countries.begin());
  };
  for (const auto& [pair, n] : cells) {
    auto a = index(pair.first), b = index(pair.second);
    m.counts[a][b] = n;
    m.counts[b][a] = n;
  }
  return m;
}

CountryPairMatrix country_pair_matrix(const Corpus& corpus, std::optional<TimeWindow> window,
                                      std::span<const Subfield> subfields) {
  std::vector<const WorkRecord*> scope;
  for (Subfield s : subfields) {
    auto part = corpus.targets(s, window);
    scope.insert(scope.end(), part.begin(), part.end());
  }
  return country_pair_matrix(scope);
}

double industry_rate(const Corpus& corpus, const TimeWindow& window, Subfield subfield) {
  auto scope = nonempty_scope(corpus, window, subfield);
  std::size_t hits = 0;
  for (const auto* w : scope) {
    if (std::any_of(w->authorships.begin(), w->authorships.end(),
                    [](const Authorship& a) { return a.is_industry; })) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(scope.size());
}

std::vector<std::string> industry_organizations(const Authorship& authorship,
                                                const harvest::IndustryKeywordList* keywords) {
  std::vector<std::string> candidates;
  if (!authorship.institutions.empty()) {
    candidates = authorship.institutions;
  } else {
    std::string_view raw = authorship.raw_affiliation;
    std::size_t start = 0;
    while (start <= raw.size()) {
      auto end = raw.find(';', start);
      if (end == std::string_view::npos) end = raw.size();
      auto entry = raw.substr(start, end - start);
      candidates.emplace_back(entry.substr(0, entry.find(',')));
      start = end + 1;
    }
  }
  std::vector<std::string> out;
  std::string first;
  for (const auto& c : candidates) {
    auto name = harvest::normalize_organization(c);
    if (name.empty()) continue;
    if (first.empty()) first = name;
    if (!keywords || harvest::classify_industry(name, *keywords)) out.push_back(std::move(name));
  }
  if (out.empty() && !first.empty()) out.push_back(std::move(first));
  return out;
}

std::vector<OrganizationCount> top_industry_collaborators(
    const Corpus& corpus, Subfield subfield, std::size_t k,
    const harvest::IndustryKeywordList* keywords) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto* w : corpus.targets(subfield, std::nullopt)) {
    std::set<std::string> orgs;
    for (const auto& a : w->authorships) {
      if (!a.is_industry) continue;
      for (auto& o : industry_organizations(a, keywords)) orgs.insert(std::move(o));
    }
    for (const auto& o : orgs) ++counts[o];
  }
  std::vector<OrganizationCount> ranked;
  ranked.reserve(counts.size());
  for (auto& [name, n] : counts) ranked.push_back({name, n});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.count > y.count; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::vector<std::string> select_top_authors(const Corpus& corpus, Subfield subfield,
                                            std::size_t k, std::optional<TimeWindow> window) {
  struct Tally {
    std::uint64_t works = 0;
    std::uint64_t citations = 0;
  };
  std::unordered_map<std::string, Tally> tally;
  for (const auto* w : corpus.targets(subfield, window)) {
    std::unordered_set<std::string_view> once;
    for (const auto& a : w->authorships) {
      if (a.author_id.empty() || !once.insert(a.author_id).second) continue;
      auto& t = tally[a.author_id];
      ++t.works;
      t.citations += w->citation_count;
    }
  }
  std::vector<std::pair<std::string, Tally>> rows(tally.begin(), tally.end());
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    if (x.second.works != y.second.works) return x.second.works > y.second.works;
    if (x.second.citations != y.second.citations) return x.second.citations > y.second.citations;
    return x.first < y.first;
  });
  if (rows.size() > k) rows.resize(k);
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(r.first));
  return out;
}

CoauthorNetwork::CoauthorNetwork(std::vector<std::string> nodes, std::vector<CoauthorEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.a == e.b) throw Error(ErrorKind::InvalidArgument, "self-loop in co-author network");
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.b >= nodes_.size()) throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    if (e.weight < 1) throw Error(ErrorKind::InvalidArgument, "edge weight must be >= 1");
    max_weight_ = std::max(max_weight_, e.weight);
  }
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b) {
      throw Error(ErrorKind::InvalidArgument, "duplicate edge in co-author network");
    }
  }
}

double CoauthorNetwork::normalized_weight(const CoauthorEdge& e) const {
  return static_cast<double>(e.weight) / static_cast<double>(max_weight_);
}

CoauthorNetwork build_coauthor_network(const Corpus& corpus, Subfield subfield,
                                       const TimeWindow& window,
                                       std::span<const std::string> selected) {
  std::unordered_set<std::string_view> chosen(selected.begin(), selected.end());
  auto scope = corpus.targets(subfield, window);

  std::set<std::string> active;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_weights;
  for (const auto* w : scope) {
    std::set<std::string> members;
    for (const auto& a : w->authorships) {
      if (chosen.contains(a.author_id)) members.insert(a.author_id);
    }
    active.insert(members.begin(), members.end());
    for (auto i = members.begin(); i != members.end(); ++i) {
      for (auto j = std::next(i); j != members.end(); ++j) ++pair_weights[{*i, *j}];
    }
  }
  std::vector<std::string> nodes(active.begin(), active.end());
  auto index = [&](const std::string& id) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) -
                                    nodes.begin());
  };
  std::vector<CoauthorEdge> edges;
  edges.reserve(pair_weights.size());
  for (const auto& [pair, wgt] : pair_weights) {
    edges.push_back({index(pair.first), index(pair.second), wgt});
  }
  return CoauthorNetwork(std::move(nodes), std::move(edges));
}

ClusteringResult weighted_clustering(const CoauthorNetwork& network) {
  const std::size_t n = network.nodes().size();
  if (n == 0) throw Error(ErrorKind::InsufficientData, "empty co-author network");

  // Adjacency lists sorted by neighbor index, holding normalized weights.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : network.edges()) {
    const double w = network.normalized_weight(e);
    adj[e.a].emplace_back(e.b, w);
    adj[e.b].emplace_back(e.a, w);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  auto connected = [&](std::size_t j, std::size_t k) {
    const auto& list = adj[j];
    auto it = std::lower_bound(list.begin(), list.end(), k,
                               [](const auto& entry, std::size_t v) { return entry.first < v; });
    return it != list.end() && it->first == k;
  };

  ClusteringResult result;
  result.per_node.assign(n, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = adj[i];
    if (nb.size() < 2) continue;
    double numer = 0.0, denom = 0.0;
    for (std::size_t x = 0; x < nb.size(); ++x) {
      for (std::size_t y = x + 1; y < nb.size(); ++y) {
        const double g = std::sqrt(nb[x].second * nb[y].second);
        denom += g;
        if (connected(nb[x].first, nb[y].first)) numer += g;
      }
    }
    if (denom > 0.0) result.per_node[i] = numer / denom;
    sum += result.per_node[i];
  }
  result.global = sum / static_cast<double>(n);
  return result;
}

std::set<std::string> collaborator_sets(const Corpus& corpus, std::string_view author_id,
                                        const TimeWindow& window,
                                        std::optional<Subfield> subfield) {
  std::set<std::string> out;
  for (const auto* w : corpus.works_of(author_id, window)) {
    if (subfield && (w->role != WorkRole::Target || w->subfield != subfield)) continue;
    for (const auto& a : w->authorships) {
      if (!a.author_id.empty() && a.author_id != author_id) out.insert(a.author_id);
    }
  }
  return out;
}

std::optional<double> jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  if (uni == 0) return std::nullopt;
  return static_cast<double>(common) / static_cast<double>(uni);
}

StabilityResult jaccard_stability(const Corpus& corpus, const TimeWindow& first,
                                  const TimeWindow& second, std::span<const std::string> authors,
                                  std::optional<Subfield> subfield, InactivePolicy policy) {
  auto active_in = [&](const std::string& id, const TimeWindow& w) {
    for (const auto* work : corpus.works_of(id, w)) {
      if (!subfield || (work->role == WorkRole::Target && work->subfield == subfield)) return true;
    }
    return false;
  };
  double sum = 0.0;
  StabilityResult r;
  for (const auto& id : authors) {
    if (policy == InactivePolicy::Exclude && (!active_in(id, first) || !active_in(id, second))) {
      continue;
    }
    auto j = jaccard(collaborator_sets(corpus, id, first, subfield),
                     collaborator_sets(corpus, id, second, subfield));
    if (!j) continue;
    sum += *j;
    ++r.n_authors;
  }
  if (r.n_authors == 0) {
    throw Error(ErrorKind::InsufficientData,
                "no authors eligible for stability between " + first.label() + " and " +
                    second.label());
  }
  r.value = sum / static_cast<double>(r.n_authors);
  return r;
}

}  // namespace scholarmetrics::collab
