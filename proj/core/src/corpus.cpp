#include "scholarmetrics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics {

namespace {

constexpr std::array<std::string_view, 2> kAiVenues = {"AAAI", "IJCAI"};
constexpr std::array<std::string_view, 3> kCvVenues = {"CVPR", "ECCV", "ICCV"};
constexpr std::array<std::string_view, 3> kMlVenues = {"ICLR", "ICML", "NeurIPS"};
constexpr std::array<std::string_view, 3> kNlpVenues = {"ACL", "EMNLP", "NAACL"};
constexpr std::array<std::string_view, 2> kWebIrVenues = {"SIGIR", "WWW"};
constexpr std::array<std::string_view, 13> kAllVenues = {
    "AAAI", "IJCAI", "CVPR", "ECCV", "ICCV", "ICLR", "ICML",
    "NeurIPS", "ACL", "EMNLP", "NAACL", "SIGIR", "WWW"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string_view to_string(Subfield s) noexcept {
  switch (s) {
    case Subfield::AI: return "AI";
    case Subfield::CV: return "CV";
    case Subfield::ML: return "ML";
    case Subfield::NLP: return "NLP";
    case Subfield::WebIR: return "WebIR";
  }
  return "?";
}

std::optional<Subfield> parse_subfield(std::string_view text) {
  text = trim(text);
  for (Subfield s : kAllSubfields) {
    if (iequals(text, to_string(s))) return s;
  }
  if (iequals(text, "Web&IR") || iequals(text, "Web & IR") || iequals(text, "Web_IR")) {
    return Subfield::WebIR;
  }
  return std::nullopt;
}

std::span<const std::string_view> venues_of(Subfield s) noexcept {
  switch (s) {
    case Subfield::AI: return kAiVenues;
    case Subfield::CV: return kCvVenues;
    case Subfield::ML: return kMlVenues;
    case Subfield::NLP: return kNlpVenues;
    case Subfield::WebIR: return kWebIrVenues;
  }
  return {};
}

std::span<const std::string_view> all_venue_keys() noexcept { return kAllVenues; }

std::optional<std::string_view> canonical_venue(std::string_view venue_key) {
  venue_key = trim(venue_key);
  if (iequals(venue_key, "NIPS")) return std::string_view{"NeurIPS"};
  for (auto v : kAllVenues) {
    if (iequals(v, venue_key)) return v;
  }
  return std::nullopt;
}

std::optional<Subfield> subfield_for_venue(std::string_view venue_key) {
  auto canon = canonical_venue(venue_key);
  if (!canon) return std::nullopt;
  for (Subfield s : kAllSubfields) {
    for (auto v : venues_of(s)) {
      if (v == *canon) return s;
    }
  }
  return std::nullopt;
}

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

std::int64_t days_between(const Date& from, const Date& to) {
  return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

std::string TimeWindow::label() const { return fmt::format("{}-{}", start_year, end_year); }

std::optional<TimeWindow> parse_window_label(std::string_view label) {
  label = trim(label);
  auto dash = label.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  TimeWindow w;
  if (!parse_int(label.substr(0, dash), w.start_year) ||
      !parse_int(label.substr(dash + 1), w.end_year) || w.start_year > w.end_year) {
    return std::nullopt;
  }
  return w;
}

std::vector<TimeWindow> make_window_partition(int start_year, int end_year, int width) {
  if (width < 1) throw Error(ErrorKind::InvalidArgument, "window width must be >= 1");
  if (end_year < start_year) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("end year {} precedes start year {}", end_year, start_year));
  }
  std::vector<TimeWindow> out;
  for (int y = start_year; y <= end_year; y += width) {
    out.push_back({y, std::min(end_year, y + width - 1)});
  }
  return out;
}

std::string normalize_doi(std::string_view raw) {
  std::string s{trim(raw)};
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                  "http://dx.doi.org/", "doi.org/", "doi:"}) {
    if (s.starts_with(prefix)) {
      s.erase(0, prefix.size());
      break;
    }
  }
  return std::string{trim(s)};
}

std::string_view to_string(WorkRole r) noexcept {
  switch (r) {
    case WorkRole::Target: return "target";
    case WorkRole::Reference: return "reference";
    case WorkRole::Citer: return "citer";
  }
  return "?";
}

std::optional<WorkRole> parse_work_role(std::string_view text) {
  for (WorkRole r : {WorkRole::Target, WorkRole::Reference, WorkRole::Citer}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

std::optional<int> WorkRecord::year() const {
  if (!pub_date) return std::nullopt;
  return static_cast<int>(pub_date->year());
}

const std::string* WorkRecord::primary_discipline() const {
  for (const auto& t : topics) {
    if (t.is_primary) return &t.discipline;
  }
  return nullptr;
}

void assign_subfield(WorkRecord& work) { work.subfield = subfield_for_venue(work.venue_key); }

std::optional<TimeWindow> assign_window(const WorkRecord& work,
                                        std::span<const TimeWindow> partition) {
  auto y = work.year();
  if (!y) return std::nullopt;
  for (const auto& w : partition) {
    if (w.contains(*y)) return w;
  }
  return std::nullopt;
}

Corpus::Corpus(std::vector<WorkRecord> works, std::vector<TimeWindow> windows,
               std::string provenance)
    : works_(std::move(works)), windows_(std::move(windows)), provenance_(std::move(provenance)) {
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    if (windows_[i].start_year > windows_[i].end_year) {
      throw Error(ErrorKind::InvalidArgument, "window " + windows_[i].label() + " is inverted");
    }
    if (i > 0 && windows_[i].start_year <= windows_[i - 1].end_year) {
      throw Error(ErrorKind::InvalidArgument, "windows must be disjoint and ordered");
    }
  }

  std::unordered_set<std::string> dois;
  std::map<std::string, AuthorRecord> authors;
  work_index_.reserve(works_.size());
  for (std::size_t i = 0; i < works_.size(); ++i) {
    const auto& w = works_[i];
    if (w.work_id.empty()) throw Error(ErrorKind::InvalidArgument, "work with empty work_id");
    if (!work_index_.emplace(w.work_id, i).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate work_id " + w.work_id);
    }
    if (!w.doi.empty() && !dois.insert(w.doi).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate doi " + w.doi);
    }
    if (std::count_if(w.topics.begin(), w.topics.end(),
                      [](const Topic& t) { return t.is_primary; }) > 1) {
      throw Error(ErrorKind::InvalidArgument, "work " + w.work_id + " has several primary topics");
    }
    if (w.citation_count < w.citer_events.size()) {
      throw Error(ErrorKind::InvalidArgument,
                  "work " + w.work_id + " has more citer events than its citation count");
    }
    for (const auto& a : w.authorships) {
      if (a.author_id.empty()) continue;
      auto& rec = authors[a.author_id];
      if (rec.author_id.empty()) {
        rec.author_id = a.author_id;
        rec.display_name = a.author_name;
      }
      rec.work_ids.push_back(w.work_id);
    }
  }

  authors_.reserve(authors.size());
  for (auto& [id, rec] : authors) {
    std::sort(rec.work_ids.begin(), rec.work_ids.end());
    rec.work_ids.erase(std::unique(rec.work_ids.begin(), rec.work_ids.end()), rec.work_ids.end());
    author_index_.emplace(id, authors_.size());
    authors_.push_back(std::move(rec));
  }
}

const WorkRecord* Corpus::find_work(std::string_view work_id) const {
  auto it = work_index_.find(std::string{work_id});
  return it == work_index_.end() ? nullptr : &works_[it->second];
}

const AuthorRecord* Corpus::find_author(std::string_view author_id) const {
  auto it = author_index_.find(std::string{author_id});
  return it == author_index_.end() ? nullptr : &authors_[it->second];
}

std::vector<const WorkRecord*> Corpus::targets(std::optional<Subfield> subfield,
                                               std::optional<TimeWindow> window) const {
  std::vector<const WorkRecord*> out;
  for (const auto& w : works_) {
    if (w.role != WorkRole::Target) continue;
    if (subfield && w.subfield != subfield) continue;
    if (window) {
      auto y = w.year();
      if (!y || !window->contains(*y)) continue;
    }
    out.push_back(&w);
  }
  return out;
}

std::vector<const WorkRecord*> Corpus::works_of(std::string_view author_id,
                                                std::optional<TimeWindow> window) const {
  std::vector<const WorkRecord*> out;
  const AuthorRecord* a = find_author(author_id);
  if (!a) return out;
  for (const auto& id : a->work_ids) {
    const WorkRecord* w = find_work(id);
    if (window) {
      auto y = w->year();
      if (!y || !window->contains(*y)) continue;
    }
    out.push_back(w);
  }
  return out;
}

std::vector<YearlyCountRow> yearly_counts(const Corpus& corpus) {
  struct Cell {
    std::uint64_t papers = 0;
    std::set<std::string> authors;
    std::uint64_t citations = 0;
  };
  std::map<std::pair<int, Subfield>, Cell> cells;
  for (const WorkRecord* w : corpus.targets(std::nullopt, std::nullopt)) {
    if (!w->subfield || !w->pub_date) continue;
    auto& cell = cells[{*w->year(), *w->subfield}];
    ++cell.papers;
    for (const auto& a : w->authorships) {
      if (!a.author_id.empty()) cell.authors.insert(a.author_id);
    }
    cell.citations += w->citer_events.size();
  }
  std::vector<YearlyCountRow> rows;
  rows.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    rows.push_back({key.first, key.second, cell.papers, cell.authors.size(), cell.citations});
  }
  return rows;
}

}  // namespace scholarmetrics
