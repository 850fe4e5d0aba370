#pragma once

// Brute-force reference implementations. They deliberately avoid the engine's
// helpers so a shared mistake cannot hide in both.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "scholarmetrics/corpus.hpp"

namespace scholarmetrics::testkit {

inline constexpr std::size_t kOracleMaxNodes = 200;

/// (a, b, weight) with a != b; any order, no duplicates.
using WeightedEdge = std::tuple<std::size_t, std::size_t, std::uint64_t>;

/// Per-node weighted clustering by enumerating every (i, j, k) triple.
/// Throws InvalidArgument above kOracleMaxNodes nodes.
std::vector<double> oracle_clustering(std::size_t n_nodes, std::span<const WeightedEdge> edges);

/// Plain local clustering: closed neighbor pairs over all neighbor pairs.
std::vector<double> oracle_unweighted_clustering(std::size_t n_nodes,
                                                 std::span<const WeightedEdge> edges);

struct PairCounts {
  std::uint64_t total = 0;
  std::uint64_t cross = 0;
  auto operator<=>(const PairCounts&) const = default;
};

/// Explicit double loop over known-country author pairs.
PairCounts oracle_pair_counts(const WorkRecord& work);

/// Tries every h from the top down.
std::uint64_t oracle_h_index(std::span<const std::uint64_t> counts);

double oracle_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Co-authors found by scanning every corpus work (no author index).
std::vector<std::string> oracle_collaborators(const Corpus& corpus, const std::string& author_id,
                                              const TimeWindow& window,
                                              std::optional<Subfield> subfield);

/// Mean Jaccard over authors with works in both windows and a nonempty union.
std::optional<double> oracle_jaccard_stability(const Corpus& corpus, const TimeWindow& first,
                                               const TimeWindow& second,
                                               std::span<const std::string> authors,
                                               std::optional<Subfield> subfield);

/// Log base 2, keys missing on one side count as 0.
double oracle_js(const std::map<std::string, double>& p, const std::map<std::string, double>& q);

/// Natural-log entropy.
double oracle_entropy(std::span<const double> p);

}  // namespace scholarmetrics::testkit
