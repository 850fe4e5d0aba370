#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scholarmetrics/corpus.hpp"

namespace scholarmetrics::authors {

/// H-index over the citation counts of every corpus work by the author.
/// Throws Error{NotFound} for unknown authors.
std::uint64_t author_h_index(const Corpus& corpus, std::string_view author_id);

using Distribution = std::map<std::string, double>;

struct TopicDistribution {
  std::string author_id;
  TimeWindow window;
  Distribution proportions;
  std::size_t support_count = 0;
};

/// Primary-topic discipline shares over the author's works in `window`. With a
/// subfield only that subfield's target works count. Works without a primary
/// topic do not contribute.
TopicDistribution topic_distribution(const Corpus& corpus, std::string_view author_id,
                                     const TimeWindow& window,
                                     std::optional<Subfield> subfield = std::nullopt);

inline constexpr double kDefaultLogBase = 2.0;

/// Jensen-Shannon divergence; keys missing on one side count as 0. Throws
/// InvalidDistribution when either side is not a probability distribution.
double js_divergence(const Distribution& p, const Distribution& q,
                     double log_base = kDefaultLogBase);

/// Mean divergence between consecutive windows where both distributions have
/// support; nullopt without such a pair.
std::optional<double> author_mobility(const Corpus& corpus, std::string_view author_id,
                                      std::span<const TimeWindow> windows,
                                      std::optional<Subfield> subfield = std::nullopt,
                                      double log_base = kDefaultLogBase);

struct FieldMobility {
  double mean = 0.0;
  std::vector<double> per_author;  ///< defined values, in selection order
  std::size_t n_selected = 0;
};

/// Mean author mobility over the field's top-k authors by output.
/// Throws InsufficientData when no selected author has a defined value.
FieldMobility field_mobility(const Corpus& corpus, Subfield subfield, std::size_t top_k,
                             std::span<const TimeWindow> windows,
                             double log_base = kDefaultLogBase);

struct MigrationFlow {
  std::string from_discipline;
  std::string to_discipline;
  std::uint64_t count = 0;
  std::int64_t net = 0;
};

/// The discipline with the largest share; nullopt when empty or tied.
std::optional<std::string> dominant_discipline(const Distribution& d);

/// All directed dominant-discipline transitions between consecutive windows,
/// keyed (from, to). `authors` restricts the population; all authors otherwise.
std::map<std::pair<std::string, std::string>, std::uint64_t> transition_counts(
    const Corpus& corpus, std::span<const TimeWindow> windows,
    std::optional<std::span<const std::string>> authors = std::nullopt);

/// The top_n directions by count (ties by from, to) with net values.
std::vector<MigrationFlow> migration_flows(
    const Corpus& corpus, std::span<const TimeWindow> windows, std::size_t top_n,
    std::optional<std::span<const std::string>> authors = std::nullopt);

/// Flows for every observed direction ranked as in migration_flows.
std::vector<MigrationFlow> rank_flows(
    const std::map<std::pair<std::string, std::string>, std::uint64_t>& transitions,
    std::size_t top_n);

}  // namespace scholarmetrics::authors
