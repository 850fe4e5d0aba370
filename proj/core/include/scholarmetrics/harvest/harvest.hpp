#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scholarmetrics/corpus.hpp"
#include "scholarmetrics/harvest/industry.hpp"
#include "scholarmetrics/harvest/listing.hpp"
#include "scholarmetrics/harvest/openalex.hpp"

namespace scholarmetrics::harvest {

struct HarvestOptions {
  std::vector<std::string> venues;
  int start_year = 2000;
  int end_year = 2024;
  /// Local listings named `<VENUE>-<YEAR>.xml`; consulted before the network.
  std::optional<std::filesystem::path> listing_dir;
  /// `{venue}` (lowercase key) and `{year}` are substituted; empty disables fetching.
  std::string listing_url_template = "https://dblp.org/db/conf/{venue}/{venue}{year}.xml";
  std::string openalex_base_url = "https://api.openalex.org";
  FetchPolicy policy;
  int min_pages = kDefaultMinPages;
  ExpandMode expand = ExpandMode::Both;
};

struct HarvestResult {
  std::vector<WorkRecord> works;
  SkipReport skips;
  bool complete = true;
  std::size_t listings_read = 0;
  std::size_t dois_selected = 0;
};

/// Listing -> DOI filter -> metadata fetch -> neighborhood expansion.
/// Target works get their venue, subfield and role set; front-matter items
/// (proceedings, editorials) are skipped with reason `proceedings_record`.
HarvestResult run_harvest(const HarvestOptions& options, const IndustryKeywordList& keywords,
                          ResponseCache& cache, Transport& transport);

}  // namespace scholarmetrics::harvest
