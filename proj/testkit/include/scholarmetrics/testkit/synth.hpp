#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scholarmetrics/corpus.hpp"

namespace scholarmetrics::testkit {

/// Parameters of a synthetic corpus with known structure.
struct SynthSpec {
  std::uint64_t seed = 20240611;
  std::vector<Subfield> subfields{kAllSubfields.begin(), kAllSubfields.end()};
  int start_year = 2000;
  int end_year = 2024;
  int window_width = 5;
  /// Target works per (subfield, window).
  std::size_t works_per_cell = 40;

  /// Citation counts follow y_r = C * r^-alpha (times U[0.9, 1.1]) over each
  /// subfield's works in random order, with C chosen so the last rank expects
  /// `tail_citations`.
  double alpha = 1.5;
  double tail_citations = 2.0;
  /// Citer events materialized per work (the count itself is not capped).
  std::size_t max_citer_events = 110;
  /// Median days to the 25th citation; per-work values spread log-uniformly
  /// over [median / spread, median * spread].
  double median_days_to_25 = 400.0;
  double days_spread = 3.0;

  /// Author home countries; "unknown" is allowed.
  std::vector<std::pair<std::string, double>> country_mixture{
      {"US", 0.40}, {"CN", 0.30}, {"GB", 0.10}, {"DE", 0.10}, {"unknown", 0.10}};
  double industry_probability = 0.2;

  std::size_t authors_per_subfield = 120;
  std::size_t clique_size = 6;
  double inter_clique_probability = 0.15;
  std::size_t min_authors_per_work = 1;
  std::size_t max_authors_per_work = 6;

  /// Discipline vocabulary; authors get a home discipline from it.
  std::vector<std::string> disciplines{
      "Artificial Intelligence",     "Computer Vision and Pattern Recognition",
      "Signal Processing",           "Information Systems",
      "Statistics and Probability",  "Linguistics and Language",
      "Human-Computer Interaction"};
  /// Probability that a work's primary topic is its first author's home discipline.
  double topic_stickiness = 0.7;

  std::size_t neighbor_pool = 400;
  std::size_t references_per_work = 8;
  /// Share of references that point at other target works.
  double internal_reference_share = 0.3;

  /// Throws InvalidArgument for out-of-range or infeasible settings.
  void validate() const;
};

/// Deterministic in `spec.seed`.
Corpus generate_corpus(const SynthSpec& spec);

}  // namespace scholarmetrics::testkit
