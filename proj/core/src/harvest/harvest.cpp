#include "scholarmetrics/harvest/harvest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::harvest {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

// DBLP stores NeurIPS under its old key.
std::string dblp_venue_key(std::string_view venue) {
  std::string v = lower(std::string{venue});
  return v == "neurips" ? "nips" : v;
}

std::optional<std::string> read_listing(const HarvestOptions& options, const std::string& venue,
                                        int year, ResponseCache& cache, Transport& transport,
                                        SkipReport& skips) {
  if (options.listing_dir) {
    for (const auto& name : {fmt::format("{}-{}.xml", venue, year),
                             fmt::format("{}-{}.xml", lower(venue), year)}) {
      std::ifstream in(*options.listing_dir / name, std::ios::binary);
      if (in) {
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
      }
    }
  }
  if (options.listing_url_template.empty()) {
    skips.add("", "listing", fmt::format("listing_missing:{}-{}", venue, year));
    return std::nullopt;
  }
  std::string url = replace_all(options.listing_url_template, "{venue}", dblp_venue_key(venue));
  url = replace_all(url, "{year}", std::to_string(year));
  try {
    return cache.get_or_fetch("listing:" + url, [&] {
      auto res = transport.get(url);
      if (res.status == 200) return res.body;
      throw Error(res.status == 0 ? ErrorKind::TransientError : ErrorKind::NotFound,
                  fmt::format("HTTP {} for {}", res.status, url));
    });
  } catch (const Error& e) {
    // A missing listing (e.g. a year the conference was not held) is missing data.
    skips.add("", "listing",
              fmt::format("{}:{}-{}", e.kind() == ErrorKind::NotFound ? "listing_not_found"
                                                                       : "listing_unreachable",
                          venue, year));
    return std::nullopt;
  }
}

}  // namespace

HarvestResult run_harvest(const HarvestOptions& options, const IndustryKeywordList& keywords,
                          ResponseCache& cache, Transport& transport) {
  options.policy.validate();
  HarvestResult result;

  struct Selected {
    std::string doi;
    std::string venue;
  };
  std::vector<Selected> selected;
  std::set<std::string> seen;
  for (const auto& raw_venue : options.venues) {
    auto canon = canonical_venue(raw_venue);
    if (!canon) throw Error(ErrorKind::InvalidArgument, "unknown venue '" + raw_venue + "'");
    std::string venue{*canon};
    for (int year = options.start_year; year <= options.end_year; ++year) {
      auto text = read_listing(options, venue, year, cache, transport, result.skips);
      if (!text) continue;
      ++result.listings_read;
      auto entries = parse_dblp_listing(*text, venue, year);
      auto filtered = filter_dois(entries, options.min_pages);
      result.skips.append(filtered.exclusions);
      for (auto& doi : filtered.dois) {
        if (seen.insert(doi).second) {
          selected.push_back({doi, venue});
        } else {
          result.skips.add(doi, "filter", "duplicate");
        }
      }
    }
  }
  result.dois_selected = selected.size();

  OpenAlexClient client(options.openalex_base_url, options.policy, cache, transport, &keywords);
  std::vector<std::optional<ParsedWork>> fetched(selected.size());
  std::vector<std::string> errors(selected.size());
  parallel_for(selected.size(), options.policy.max_concurrent_requests, [&](std::size_t i) {
    try {
      fetched[i] = client.fetch_work_metadata(selected[i].doi);
    } catch (const Error& e) {
      errors[i] = e.kind() == ErrorKind::NotFound         ? "not_found"
                  : e.kind() == ErrorKind::TransientError ? "transient"
                  : e.kind() == ErrorKind::SchemaError    ? "schema"
                                                          : to_string(e.kind());
    }
  });

  std::vector<WorkRecord> seeds;
  std::set<std::string> seed_ids;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!fetched[i]) {
      result.skips.add(selected[i].doi, "fetch", errors[i]);
      if (errors[i] == "transient") result.complete = false;
      continue;
    }
    if (is_non_paper_type(fetched[i]->type)) {
      result.skips.add(selected[i].doi, "fetch", "proceedings_record");
      continue;
    }
    WorkRecord rec = std::move(fetched[i]->record);
    if (!seed_ids.insert(rec.work_id).second) {
      result.skips.add(selected[i].doi, "fetch", "duplicate_work_id");
      continue;
    }
    rec.venue_key = selected[i].venue;
    rec.role = WorkRole::Target;
    if (rec.doi.empty()) rec.doi = selected[i].doi;
    assign_subfield(rec);
    seeds.push_back(std::move(rec));
  }

  auto expansion = expand_citation_neighborhood(seeds, client, options.expand);
  result.works = std::move(expansion.works);
  result.skips.append(expansion.skips.records());
  result.complete = result.complete && expansion.complete;
  return result;
}

}  // namespace scholarmetrics::harvest
