#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scholarmetrics {

// ---------------------------------------------------------------------------
// Subfields and venues
// ---------------------------------------------------------------------------

enum class Subfield { AI, CV, ML, NLP, WebIR };

inline constexpr std::array<Subfield, 5> kAllSubfields = {
    Subfield::AI, Subfield::CV, Subfield::ML, Subfield::NLP, Subfield::WebIR};

std::string_view to_string(Subfield s) noexcept;

/// Accepts the canonical codes plus "Web&IR" / "WebIR" spellings, case-insensitive.
std::optional<Subfield> parse_subfield(std::string_view text);

/// Conference keys owned by a subfield, in canonical spelling.
std::span<const std::string_view> venues_of(Subfield s) noexcept;

/// All 13 conference keys.
std::span<const std::string_view> all_venue_keys() noexcept;

/// Case-insensitive venue lookup; "NIPS" is accepted as an alias of NeurIPS.
std::optional<Subfield> subfield_for_venue(std::string_view venue_key);

/// Canonical spelling of a venue key ("neurips" -> "NeurIPS"), or nullopt.
std::optional<std::string_view> canonical_venue(std::string_view venue_key);

// ---------------------------------------------------------------------------
// Dates and windows
// ---------------------------------------------------------------------------

using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM-DD". Anything else (including invalid calendar dates) is nullopt.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& d);
/// Signed day difference `to - from`.
std::int64_t days_between(const Date& from, const Date& to);

struct TimeWindow {
  int start_year = 0;
  int end_year = 0;

  bool contains(int year) const noexcept { return year >= start_year && year <= end_year; }
  /// "2000-2004"
  std::string label() const;

  auto operator<=>(const TimeWindow&) const = default;
};

std::optional<TimeWindow> parse_window_label(std::string_view label);

/// Consecutive disjoint windows of `width` years covering [start_year, end_year];
/// the last window is truncated at end_year.
std::vector<TimeWindow> make_window_partition(int start_year, int end_year, int width);

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

inline constexpr std::string_view kUnknownCountry = "unknown";

std::string normalize_doi(std::string_view raw);

struct Authorship {
  std::string author_id;
  std::string author_name;
  std::string raw_affiliation;
  std::string country_code{kUnknownCountry};
  bool is_industry = false;
  /// Provider-normalized institution names, when the provider supplies them.
  std::vector<std::string> institutions;

  bool has_known_country() const noexcept {
    return !country_code.empty() && country_code != kUnknownCountry;
  }
};

struct Topic {
  std::string discipline;
  bool is_primary = false;
};

struct CitationEvent {
  std::string work_id;
  Date date;
};

enum class WorkRole { Target, Reference, Citer };

std::string_view to_string(WorkRole r) noexcept;
std::optional<WorkRole> parse_work_role(std::string_view text);

struct WorkRecord {
  std::string work_id;
  std::string doi;
  std::string title;
  std::string venue_key;
  std::optional<Subfield> subfield;
  std::optional<Date> pub_date;
  std::vector<Authorship> authorships;
  std::vector<Topic> topics;
  std::vector<std::string> referenced_ids;
  std::vector<CitationEvent> citer_events;
  std::uint64_t citation_count = 0;
  WorkRole role = WorkRole::Target;

  std::optional<int> year() const;
  /// Discipline of the primary topic, if one is flagged.
  const std::string* primary_discipline() const;
};

/// Sets `work.subfield` from its venue key (nullopt for unknown venues).
void assign_subfield(WorkRecord& work);

/// The window holding the work's publication year, or nullopt when the date is
/// missing or outside every window.
std::optional<TimeWindow> assign_window(const WorkRecord& work,
                                        std::span<const TimeWindow> partition);

struct AuthorRecord {
  std::string author_id;
  std::string display_name;
  /// Sorted, unique.
  std::vector<std::string> work_ids;
};

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

/// Immutable, indexed collection of works with the window partition attached.
/// Construction validates record invariants and throws InvalidArgument on
/// violation.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<WorkRecord> works, std::vector<TimeWindow> windows,
         std::string provenance = {});

  std::span<const WorkRecord> works() const noexcept { return works_; }
  std::span<const AuthorRecord> authors() const noexcept { return authors_; }
  std::span<const TimeWindow> windows() const noexcept { return windows_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return works_.size(); }
  bool empty() const noexcept { return works_.empty(); }

  const WorkRecord* find_work(std::string_view work_id) const;
  const AuthorRecord* find_author(std::string_view author_id) const;

  /// Target works, optionally restricted to a subfield and/or a window.
  std::vector<const WorkRecord*> targets(std::optional<Subfield> subfield,
                                         std::optional<TimeWindow> window) const;

  /// Every corpus work (any role) by `author_id` published inside `window`.
  std::vector<const WorkRecord*> works_of(std::string_view author_id,
                                          std::optional<TimeWindow> window) const;

 private:
  std::vector<WorkRecord> works_;
  std::vector<AuthorRecord> authors_;
  std::vector<TimeWindow> windows_;
  std::string provenance_;
  std::unordered_map<std::string, std::size_t> work_index_;
  std::unordered_map<std::string, std::size_t> author_index_;
};

struct YearlyCountRow {
  int year = 0;
  Subfield subfield = Subfield::AI;
  std::uint64_t n_papers = 0;
  std::uint64_t n_distinct_authors = 0;
  std::uint64_t n_citations_received = 0;
};

/// One row per (year, subfield) that has target works; sorted by year then subfield.
std::vector<YearlyCountRow> yearly_counts(const Corpus& corpus);

}  // namespace scholarmetrics
