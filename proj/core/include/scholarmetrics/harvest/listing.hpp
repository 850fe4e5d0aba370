#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scholarmetrics::harvest {

struct PageSpan {
  int first = 0;
  int last = 0;

  int count() const noexcept { return last - first + 1; }
};

struct EntryFlags {
  bool workshop = false;
  bool short_paper = false;
  bool poster = false;

  bool any() const noexcept { return workshop || short_paper || poster; }
};

/// One publication link of a DBLP per-venue-per-year listing.
struct ListingEntry {
  std::string url;
  std::string doi;  ///< normalized; empty when the listing carries none
  std::string title;
  std::string dblp_key;
  std::string record_type;  ///< "inproceedings", "proceedings", ...
  std::string stream;       ///< section heading / booktitle the entry sits under
  std::string venue_key;
  int year = 0;
  std::optional<PageSpan> page_span;
  EntryFlags flags;

  /// Inclusive page count when the pagination field yields one.
  std::optional<int> page_count() const {
    if (!page_span) return std::nullopt;
    return page_span->count();
  }
};

/// Parses a pagination field. Accepts "123-139", "123--139", "12:1-12:14" and
/// "e123-e130". A lone number is ambiguous (page vs. article number) and
/// yields nullopt, as do roman numerals and reversed spans.
std::optional<PageSpan> parse_pagination(std::string_view pages);

/// Parses a DBLP table-of-contents XML document (the `db/conf/<venue>/<file>.xml`
/// export, or a `search/publ/api?format=xml` result page). Headings (`h2`..`h4`)
/// and `booktitle` set each entry's stream. Throws ParseError with the byte
/// offset on malformed XML. Whitespace-only input yields no entries.
std::vector<ListingEntry> parse_dblp_listing(std::string_view raw_listing,
                                             std::string_view venue_key, int year);

/// One excluded item, written as a row of the skip report.
struct SkipRecord {
  std::string doi;
  std::string stage;
  std::string reason;

  bool operator==(const SkipRecord&) const = default;
};

/// Accumulates exclusions across harvest stages; written as CSV `doi,stage,reason`
/// in insertion order.
class SkipReport {
 public:
  void add(std::string doi, std::string stage, std::string reason);
  void append(std::span<const SkipRecord> records);

  std::span<const SkipRecord> records() const noexcept { return records_; }
  std::size_t count(std::string_view stage) const;
  std::size_t size() const noexcept { return records_.size(); }

  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<SkipRecord> records_;
};

struct FilterResult {
  std::vector<std::string> dois;
  /// Every entry that did not contribute a DOI, with a machine-readable reason:
  /// proceedings_record, workshop, short, poster, no_doi, too_few_pages, duplicate.
  std::vector<SkipRecord> exclusions;
};

inline constexpr int kDefaultMinPages = 7;

/// Keeps main-track full-length entries. Entries without page information are
/// retained; output is deduplicated and keeps first-seen order.
FilterResult filter_dois(std::span<const ListingEntry> entries, int min_pages = kDefaultMinPages);

}  // namespace scholarmetrics::harvest
