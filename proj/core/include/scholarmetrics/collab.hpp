#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "scholarmetrics/corpus.hpp"
#include "scholarmetrics/harvest/industry.hpp"

namespace scholarmetrics::collab {

/// Mean number of authors per work in (subfield, window).
double collaboration_index(const Corpus& corpus, const TimeWindow& window, Subfield subfield);
double collaboration_index(std::span<const WorkRecord* const> works);

/// Cross-country author pairs over all known-country author pairs;
/// nullopt with fewer than two known-country authors.
std::optional<double> international_pair_ratio(const WorkRecord& work);

/// Number of distinct known countries on a work.
std::size_t distinct_countries(const WorkRecord& work);

struct InternationalRates {
  double simple_ratio = 0.0;
  /// Mean pair ratio over works where it is defined; 0 when none is.
  double pair_ratio_mean = 0.0;
  std::size_t n_works = 0;
  std::size_t n_pair_defined = 0;
};

InternationalRates international_rates(const Corpus& corpus, const TimeWindow& window,
                                       Subfield subfield);

struct CountryPairMatrix {
  std::vector<std::string> countries;              ///< sorted ISO codes
  std::vector<std::vector<std::uint64_t>> counts;  ///< symmetric, zero diagonal

  std::uint64_t at(std::string_view a, std::string_view b) const;
  /// Per-country participation (row sums), aligned with `countries`.
  std::vector<std::uint64_t> totals() const;
  /// Sum over unordered cells (each cross pair once).
  std::uint64_t total_pairs() const;
};

CountryPairMatrix country_pair_matrix(const Corpus& corpus, std::optional<TimeWindow> window,
                                      std::span<const Subfield> subfields = kAllSubfields);
CountryPairMatrix country_pair_matrix(std::span<const WorkRecord* const> works);

/// Fraction of works in scope with at least one industry authorship.
double industry_rate(const Corpus& corpus, const TimeWindow& window, Subfield subfield);

struct OrganizationCount {
  std::string organization;
  std::uint64_t count = 0;
};

/// Industry organizations of one authorship. Institution names are used when
/// present, otherwise the leading segment of each affiliation entry; with a
/// keyword list only names that classify as industry are kept (falling back to
/// the first candidate).
std::vector<std::string> industry_organizations(const Authorship& authorship,
                                                const harvest::IndustryKeywordList* keywords);

/// Works per industry organization across the subfield's targets (one count per
/// work and organization), descending, ties by name.
std::vector<OrganizationCount> top_industry_collaborators(
    const Corpus& corpus, Subfield subfield, std::size_t k,
    const harvest::IndustryKeywordList* keywords = nullptr);

// ---------------------------------------------------------------------------
// Co-author networks
// ---------------------------------------------------------------------------

/// Author ids ranked by target-work count in the subfield (restricted to
/// `window` when given), ties by total citations then id; first k kept.
std::vector<std::string> select_top_authors(const Corpus& corpus, Subfield subfield,
                                            std::size_t k,
                                            std::optional<TimeWindow> window = std::nullopt);

struct CoauthorEdge {
  std::size_t a = 0;  ///< index into nodes, a < b
  std::size_t b = 0;
  std::uint64_t weight = 0;
  auto operator<=>(const CoauthorEdge&) const = default;
};

class CoauthorNetwork {
 public:
  CoauthorNetwork() = default;
  /// Edges may come in any order; duplicates and self-loops are rejected.
  CoauthorNetwork(std::vector<std::string> nodes, std::vector<CoauthorEdge> edges);

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<CoauthorEdge>& edges() const noexcept { return edges_; }
  std::uint64_t max_weight() const noexcept { return max_weight_; }
  double normalized_weight(const CoauthorEdge& e) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<CoauthorEdge> edges_;
  std::uint64_t max_weight_ = 0;
};

/// Network over the selected authors that have at least one target work in
/// (subfield, window); edge weight = co-authored works in that scope.
CoauthorNetwork build_coauthor_network(const Corpus& corpus, Subfield subfield,
                                       const TimeWindow& window,
                                       std::span<const std::string> selected);

struct ClusteringResult {
  double global = 0.0;
  std::vector<double> per_node;  ///< aligned with network.nodes()
};

/// Weighted local clustering with geometric-mean triangle intensity on
/// max-normalized weights. Throws InsufficientData for an empty network.
ClusteringResult weighted_clustering(const CoauthorNetwork& network);

// ---------------------------------------------------------------------------
// Collaboration stability
// ---------------------------------------------------------------------------

/// Co-authors over the author's works in `window`, excluding the author. With a
/// subfield only that subfield's target works count.
std::set<std::string> collaborator_sets(const Corpus& corpus, std::string_view author_id,
                                        const TimeWindow& window,
                                        std::optional<Subfield> subfield = std::nullopt);

/// |a ∩ b| / |a ∪ b|; nullopt when the union is empty.
std::optional<double> jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

enum class InactivePolicy {
  /// Authors without works in both windows are left out of the mean.
  Exclude,
  /// Such authors contribute J = 0 when they have any collaborator.
  Zero,
};

struct StabilityResult {
  double value = 0.0;
  std::size_t n_authors = 0;
};

/// Mean Jaccard overlap of collaborator sets between two windows over `authors`.
/// Throws InsufficientData when no author is eligible.
StabilityResult jaccard_stability(const Corpus& corpus, const TimeWindow& first,
                                  const TimeWindow& second, std::span<const std::string> authors,
                                  std::optional<Subfield> subfield = std::nullopt,
                                  InactivePolicy policy = InactivePolicy::Exclude);

}  // namespace scholarmetrics::collab
