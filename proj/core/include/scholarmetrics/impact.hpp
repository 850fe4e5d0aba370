#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scholarmetrics/corpus.hpp"

namespace scholarmetrics::impact {

/// Largest h such that at least h counts are >= h.
std::uint64_t h_index(std::span<const std::uint64_t> citation_counts);

/// Rank-frequency fit y = C * x^-alpha by least squares on (ln rank, ln count).
struct PowerLawFit {
  double C = 0.0;
  double alpha = 0.0;
  /// Coefficient of determination in log space; nullopt when ln(y) has zero variance.
  std::optional<double> r2;
  std::size_t n_points = 0;
};

/// Non-positive counts are dropped. Throws InsufficientData with fewer than two
/// positive counts.
PowerLawFit fit_power_law(std::span<const double> counts);
PowerLawFit fit_power_law(std::span<const std::uint64_t> counts);

// ---------------------------------------------------------------------------
// Citation velocity
// ---------------------------------------------------------------------------

inline constexpr double kDaysPerYear = 365.25;

/// Days from publication to the n-th citation (events sorted by date),
/// clamped to at least one day. nullopt when the work has no publication date
/// or fewer than n events.
std::optional<std::int64_t> days_to_n_citations(const WorkRecord& work, std::uint64_t n);

/// Annualized velocity: threshold * 365.25 / days.
double citation_velocity(std::uint64_t threshold, std::int64_t days);

struct VelocityRecord {
  std::string work_id;
  std::uint64_t threshold = 0;
  std::int64_t days_to_threshold = 0;
  double velocity = 0.0;
};

std::optional<VelocityRecord> velocity_record(const WorkRecord& work, std::uint64_t threshold);

enum class Cohort { AllReachingN, TopCited };

/// Works at or above the citation count of the ceil(percent% * n)-th most cited
/// work; ties at the cutoff are all included.
std::vector<const WorkRecord*> top_cited(std::span<const WorkRecord* const> works,
                                         int top_percent);

/// Day counts to reach `n` citations for the cohort in (subfield, window).
/// An empty cohort yields an empty vector.
std::vector<std::int64_t> velocity_distribution(const Corpus& corpus, const TimeWindow& window,
                                                Subfield subfield, std::uint64_t n, Cohort cohort,
                                                int top_percent = 20);

// ---------------------------------------------------------------------------
// Interdisciplinarity
// ---------------------------------------------------------------------------

/// H = -sum p ln p (nats). Throws InvalidDistribution on negative entries or
/// when the sum is more than 1e-6 away from 1.
double shannon_entropy(std::span<const double> proportions);

enum class Direction { Cited, Citing };

std::string_view to_string(Direction d) noexcept;

/// Primary-topic discipline counts over a work's references (Cited) or citing
/// works (Citing). Neighbors missing from the corpus or without a primary topic
/// are ignored.
std::map<std::string, std::uint64_t> neighbor_disciplines(const WorkRecord& work,
                                                          const Corpus& corpus,
                                                          Direction direction);

/// Entropy of neighbor_disciplines; nullopt when there are no classified neighbors.
std::optional<double> work_interdisciplinarity(const WorkRecord& work, const Corpus& corpus,
                                               Direction direction);

// ---------------------------------------------------------------------------
// Observed-to-expected citation flows
// ---------------------------------------------------------------------------

struct FlowMatrix {
  std::vector<Subfield> subfields;
  std::vector<std::uint64_t> sizes;               ///< N_i
  std::vector<std::vector<double>> observed;      ///< C_ij, citing i -> cited j
  std::vector<std::vector<double>> expected;      ///< E_ij = (N_i/N)(N_j/N) C
  std::vector<std::vector<std::optional<double>>> ratio;  ///< nullopt where E_ij == 0
  std::uint64_t total_papers = 0;                 ///< N
  double total_citations = 0.0;                   ///< C
};

/// Builds expected and ratio matrices from sizes and observed counts.
/// Throws InsufficientData when N or C is zero.
FlowMatrix make_flow_matrix(std::vector<Subfield> subfields, std::vector<std::uint64_t> sizes,
                            std::vector<std::vector<double>> observed);

/// Citation flows among target works (restricted to `window` when given). An
/// edge is a distinct (citing, cited) pair known from either the reference list
/// or the citer events, with both endpoints in scope.
FlowMatrix observed_expected_matrix(const Corpus& corpus, std::optional<TimeWindow> window,
                                    std::span<const Subfield> subfields = kAllSubfields);

}  // namespace scholarmetrics::impact
