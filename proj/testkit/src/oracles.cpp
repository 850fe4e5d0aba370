#include "scholarmetrics/testkit/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::testkit {

namespace {

std::vector<std::vector<std::uint64_t>> dense(std::size_t n, std::span<const WeightedEdge> edges) {
  if (n > kOracleMaxNodes) {
    throw Error(ErrorKind::InvalidArgument, "oracle refuses networks above 200 nodes");
  }
  std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(n, 0));
  for (const auto& [a, b, weight] : edges) {
    w[a][b] = weight;
    w[b][a] = weight;
  }
  return w;
}

bool in_window(const WorkRecord& w, const TimeWindow& window) {
  if (!w.pub_date) return false;
  int y = static_cast<int>(w.pub_date->year());
  return y >= window.start_year && y <= window.end_year;
}

bool counts_for(const WorkRecord& w, std::optional<Subfield> subfield) {
  return !subfield || (w.role == WorkRole::Target && w.subfield == subfield);
}

}  // namespace

std::vector<double> oracle_clustering(std::size_t n, std::span<const WeightedEdge> edges) {
  auto w = dense(n, edges);
  std::uint64_t max_w = 0;
  for (const auto& row : w)
    for (auto x : row) max_w = std::max(max_w, x);

  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double numer = 0.0, denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (j == i || k == i) continue;
        if (w[i][j] == 0 || w[i][k] == 0) continue;
        const double wij = static_cast<double>(w[i][j]) / static_cast<double>(max_w);
        const double wik = static_cast<double>(w[i][k]) / static_cast<double>(max_w);
        const double g = std::sqrt(wij * wik);
        denom += g;
        if (w[j][k] != 0) numer += g;
      }
    }
    c[i] = denom > 0.0 ? numer / denom : 0.0;
  }
  return c;
}

std::vector<double> oracle_unweighted_clustering(std::size_t n,
                                                 std::span<const WeightedEdge> edges) {
  auto w = dense(n, edges);
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t pairs = 0, closed = 0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (j == i || k == i || w[i][j] == 0 || w[i][k] == 0) continue;
        ++pairs;
        if (w[j][k] != 0) ++closed;
      }
    }
    if (pairs > 0) c[i] = static_cast<double>(closed) / static_cast<double>(pairs);
  }
  return c;
}

PairCounts oracle_pair_counts(const WorkRecord& work) {
  PairCounts pc;
  const auto& a = work.authorships;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i].country_code == "unknown" || a[i].country_code.empty()) continue;
      if (a[j].country_code == "unknown" || a[j].country_code.empty()) continue;
      ++pc.total;
      if (a[i].country_code != a[j].country_code) ++pc.cross;
    }
  }
  return pc;
}

std::uint64_t oracle_h_index(std::span<const std::uint64_t> counts) {
  for (std::uint64_t h = counts.size(); h > 0; --h) {
    std::uint64_t at_least = 0;
    for (auto c : counts) {
      if (c >= h) ++at_least;
    }
    if (at_least >= h) return h;
  }
  return 0;
}

double oracle_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> uni = a;
  std::size_t inter = 0;
  for (const auto& x : b) {
    if (std::find(a.begin(), a.end(), x) != a.end()) {
      ++inter;
    } else {
      uni.push_back(x);
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni.size());
}

std::vector<std::string> oracle_collaborators(const Corpus& corpus, const std::string& author_id,
                                              const TimeWindow& window,
                                              std::optional<Subfield> subfield) {
  std::vector<std::string> out;
  for (const auto& w : corpus.works()) {
    if (!in_window(w, window) || !counts_for(w, subfield)) continue;
    bool mine = false;
    for (const auto& a : w.authorships) mine = mine || a.author_id == author_id;
    if (!mine) continue;
    for (const auto& a : w.authorships) {
      if (a.author_id.empty() || a.author_id == author_id) continue;
      if (std::find(out.begin(), out.end(), a.author_id) == out.end()) out.push_back(a.author_id);
    }
  }
  return out;
}

std::optional<double> oracle_jaccard_stability(const Corpus& corpus, const TimeWindow& first,
                                               const TimeWindow& second,
                                               std::span<const std::string> authors,
                                               std::optional<Subfield> subfield) {
  auto active = [&](const std::string& id, const TimeWindow& window) {
    for (const auto& w : corpus.works()) {
      if (!in_window(w, window) || !counts_for(w, subfield)) continue;
      for (const auto& a : w.authorships) {
        if (a.author_id == id) return true;
      }
    }
    return false;
  };
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& id : authors) {
    if (!active(id, first) || !active(id, second)) continue;
    auto a = oracle_collaborators(corpus, id, first, subfield);
    auto b = oracle_collaborators(corpus, id, second, subfield);
    if (a.empty() && b.empty()) continue;
    sum += oracle_jaccard(a, b);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double oracle_js(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  std::vector<std::string> keys;
  for (const auto& [k, _] : p) keys.push_back(k);
  for (const auto& [k, _] : q) {
    if (!p.contains(k)) keys.push_back(k);
  }
  double kl_p = 0.0, kl_q = 0.0;
  for (const auto& k : keys) {
    const double a = p.contains(k) ? p.at(k) : 0.0;
    const double b = q.contains(k) ? q.at(k) : 0.0;
    const double m = (a + b) / 2.0;
    if (a > 0.0) kl_p += a * std::log2(a / m);
    if (b > 0.0) kl_q += b * std::log2(b / m);
  }
  return (kl_p + kl_q) / 2.0;
}

double oracle_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h += x * std::log(1.0 / x);
  }
  return h;
}

}  // namespace scholarmetrics::testkit
