#include "scholarmetrics/harvest/listing.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <unordered_set>

#include <expat.h>

#include "scholarmetrics/corpus.hpp"
#include "scholarmetrics/csv.hpp"
#include "scholarmetrics/error.hpp"

namespace scholarmetrics::harvest {

namespace {

std::string lower(std::string_view s) {
  std::string out{s};
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return lower(haystack).find(needle) != std::string::npos;
}

bool contains_word_ci(std::string_view haystack, std::string_view word) {
  std::string h = lower(haystack);
  for (std::size_t pos = h.find(word); pos != std::string::npos; pos = h.find(word, pos + 1)) {
    bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(h[pos - 1]));
    std::size_t end = pos + word.size();
    // Plural forms ("Posters", "Shorts") still count.
    bool right = end >= h.size() || !std::isalpha(static_cast<unsigned char>(h[end])) ||
                 h[end] == 's';
    if (left && right) return true;
  }
  return false;
}

bool parse_number(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Strips an article prefix such as "12:" and an electronic-page prefix "e".
std::string_view page_token(std::string_view s) {
  s = trim(s);
  if (auto colon = s.rfind(':'); colon != std::string_view::npos) s = s.substr(colon + 1);
  if (!s.empty() && (s.front() == 'e' || s.front() == 'E')) s.remove_prefix(1);
  return s;
}

// Named entities that DBLP documents use without shipping the DTD.
const std::map<std::string, std::string, std::less<>>& latin_entities() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"Agrave", "\xC3\x80"}, {"Aacute", "\xC3\x81"}, {"Acirc", "\xC3\x82"},
      {"Atilde", "\xC3\x83"}, {"Auml", "\xC3\x84"},   {"Aring", "\xC3\x85"},
      {"AElig", "\xC3\x86"},  {"Ccedil", "\xC3\x87"}, {"Egrave", "\xC3\x88"},
      {"Eacute", "\xC3\x89"}, {"Ecirc", "\xC3\x8A"},  {"Euml", "\xC3\x8B"},
      {"Igrave", "\xC3\x8C"}, {"Iacute", "\xC3\x8D"}, {"Icirc", "\xC3\x8E"},
      {"Iuml", "\xC3\x8F"},   {"Ntilde", "\xC3\x91"}, {"Ograve", "\xC3\x92"},
      {"Oacute", "\xC3\x93"}, {"Ocirc", "\xC3\x94"},  {"Otilde", "\xC3\x95"},
      {"Ouml", "\xC3\x96"},   {"Oslash", "\xC3\x98"}, {"Ugrave", "\xC3\x99"},
      {"Uacute", "\xC3\x9A"}, {"Ucirc", "\xC3\x9B"},  {"Uuml", "\xC3\x9C"},
      {"Yacute", "\xC3\x9D"}, {"szlig", "\xC3\x9F"},  {"agrave", "\xC3\xA0"},
      {"aacute", "\xC3\xA1"}, {"acirc", "\xC3\xA2"},  {"atilde", "\xC3\xA3"},
      {"auml", "\xC3\xA4"},   {"aring", "\xC3\xA5"},  {"aelig", "\xC3\xA6"},
      {"ccedil", "\xC3\xA7"}, {"egrave", "\xC3\xA8"}, {"eacute", "\xC3\xA9"},
      {"ecirc", "\xC3\xAA"},  {"euml", "\xC3\xAB"},   {"igrave", "\xC3\xAC"},
      {"iacute", "\xC3\xAD"}, {"icirc", "\xC3\xAE"},  {"iuml", "\xC3\xAF"},
      {"ntilde", "\xC3\xB1"}, {"ograve", "\xC3\xB2"}, {"oacute", "\xC3\xB3"},
      {"ocirc", "\xC3\xB4"},  {"otilde", "\xC3\xB5"}, {"ouml", "\xC3\xB6"},
      {"oslash", "\xC3\xB8"}, {"ugrave", "\xC3\xB9"}, {"uacute", "\xC3\xBA"},
      {"ucirc", "\xC3\xBB"},  {"uuml", "\xC3\xBC"},   {"yacute", "\xC3\xBD"},
      {"yuml", "\xC3\xBF"},   {"nbsp", " "},          {"reg", "\xC2\xAE"},
      {"times", "\xC3\x97"},  {"micro", "\xC2\xB5"},
  };
  return table;
}

const std::unordered_set<std::string_view>& record_elements() {
  static const std::unordered_set<std::string_view> names = {
      "article", "inproceedings", "proceedings", "incollection", "book",
      "phdthesis", "mastersthesis", "www", "data", "info"};
  return names;
}

struct RecordDraft {
  std::string element;
  std::string type_text;  // <type> of search-API hits
  std::string key;
  std::string title;
  std::string pages;
  std::string booktitle;
  std::string url;
  std::string doi;
  std::vector<std::string> ee;
};

class ListingParser {
 public:
  ListingParser(std::string_view venue_key, int year) : venue_key_(venue_key), year_(year) {}

  std::vector<ListingEntry> run(std::string_view raw) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    if (!parser) throw Error(ErrorKind::IoError, "cannot allocate XML parser");
    XML_SetUserData(parser.get(), this);
    XML_SetElementHandler(parser.get(), &ListingParser::on_start, &ListingParser::on_end);
    XML_SetCharacterDataHandler(parser.get(), &ListingParser::on_text);
    XML_SetSkippedEntityHandler(parser.get(), &ListingParser::on_skipped_entity);
    XML_UseForeignDTD(parser.get(), XML_TRUE);
    if (XML_Parse(parser.get(), raw.data(), static_cast<int>(raw.size()), XML_TRUE) ==
        XML_STATUS_ERROR) {
      auto offset = static_cast<std::size_t>(XML_GetCurrentByteIndex(parser.get()));
      throw ParseError(offset, std::string("malformed DBLP listing: ") +
                                   XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    return std::move(entries_);
  }

 private:
  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<ListingParser*>(self)->start(name, attrs);
  }
  static void on_end(void* self, const XML_Char* name) {
    static_cast<ListingParser*>(self)->end(name);
  }
  static void on_text(void* self, const XML_Char* s, int len) {
    auto* p = static_cast<ListingParser*>(self);
    if (!p->text_.empty()) p->text_.back().append(s, static_cast<std::size_t>(len));
  }
  static void on_skipped_entity(void* self, const XML_Char* name, int is_parameter) {
    if (is_parameter) return;
    auto& table = latin_entities();
    auto it = table.find(std::string_view{name});
    auto* p = static_cast<ListingParser*>(self);
    if (!p->text_.empty()) p->text_.back() += it != table.end() ? it->second : "?";
  }

  void start(std::string_view name, const XML_Char** attrs) {
    text_.emplace_back();
    if (!record_ && record_elements().contains(name)) {
      record_ = RecordDraft{};
      record_->element = std::string{name};
      for (std::size_t i = 0; attrs[i]; i += 2) {
        if (std::string_view{attrs[i]} == "key") record_->key = attrs[i + 1];
      }
    }
  }

  void end(std::string_view name) {
    std::string raw = std::move(text_.back());
    text_.pop_back();
    // Inline markup (<i>, <sub>) inside a title keeps its text in the parent.
    if (!text_.empty()) text_.back() += raw;
    std::string content{trim(raw)};
    if (record_) {
      if (name == record_->element) {
        finish_record();
        record_.reset();
      } else if (name == "title") {
        record_->title = content;
      } else if (name == "pages") {
        record_->pages = content;
      } else if (name == "booktitle" || name == "venue") {
        if (record_->booktitle.empty()) record_->booktitle = content;
      } else if (name == "url") {
        record_->url = content;
      } else if (name == "ee") {
        record_->ee.push_back(content);
      } else if (name == "doi") {
        record_->doi = content;
      } else if (name == "type") {
        record_->type_text = content;
      } else if (name == "key") {
        record_->key = content;
      }
      return;
    }
    if (name == "h2") {
      h2_ = content;
      h3_.clear();
    } else if (name == "h3" || name == "h4") {
      h3_ = content;
    }
  }

  void finish_record() {
    RecordDraft& r = *record_;
    ListingEntry e;
    e.venue_key = venue_key_;
    e.year = year_;
    e.title = r.title;
    e.dblp_key = r.key;
    e.record_type = r.element;
    if (r.element == "info") {
      // Search API hits: the record type is a human label.
      std::string t = lower(r.type_text);
      if (t.find("editorship") != std::string::npos) {
        e.record_type = "proceedings";
      } else if (t.find("journal") != std::string::npos) {
        e.record_type = "article";
      } else {
        e.record_type = "inproceedings";
      }
    }

    std::string doi_link;
    for (const auto& link : r.ee) {
      if (contains_ci(link, "doi.org/")) {
        doi_link = link;
        break;
      }
    }
    if (!r.doi.empty()) {
      e.doi = normalize_doi(r.doi);
    } else if (!doi_link.empty()) {
      e.doi = normalize_doi(doi_link);
    }
    if (!doi_link.empty()) {
      e.url = doi_link;
    } else if (!r.ee.empty()) {
      e.url = r.ee.front();
    } else {
      e.url = r.url;
    }

    std::string stream = h2_;
    if (!h3_.empty()) stream += stream.empty() ? h3_ : " / " + h3_;
    if (!r.booktitle.empty()) stream += stream.empty() ? r.booktitle : " | " + r.booktitle;
    e.stream = stream;

    bool link_workshop = contains_ci(r.url, "workshop");
    for (const auto& link : r.ee) link_workshop = link_workshop || contains_ci(link, "workshop");
    e.flags.workshop = link_workshop || contains_ci(stream, "workshop");
    e.flags.short_paper = contains_word_ci(stream, "short");
    e.flags.poster = contains_word_ci(stream, "poster");
    e.page_span = parse_pagination(r.pages);
    entries_.push_back(std::move(e));
  }

  std::string venue_key_;
  int year_;
  std::vector<std::string> text_;
  std::string h2_;
  std::string h3_;
  std::optional<RecordDraft> record_;
  std::vector<ListingEntry> entries_;
};

}  // namespace

std::optional<PageSpan> parse_pagination(std::string_view pages) {
  pages = trim(pages);
  if (pages.empty()) return std::nullopt;
  auto dash = pages.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  std::string_view lhs = pages.substr(0, dash);
  std::string_view rhs = pages.substr(dash + 1);
  while (!rhs.empty() && rhs.front() == '-') rhs.remove_prefix(1);
  PageSpan span;
  if (!parse_number(page_token(lhs), span.first) || !parse_number(page_token(rhs), span.last)) {
    return std::nullopt;
  }
  if (span.first < 0 || span.last < span.first) return std::nullopt;
  return span;
}

std::vector<ListingEntry> parse_dblp_listing(std::string_view raw_listing,
                                             std::string_view venue_key, int year) {
  if (trim(raw_listing).empty()) return {};
  return ListingParser(venue_key, year).run(raw_listing);
}

void SkipReport::add(std::string doi, std::string stage, std::string reason) {
  records_.push_back({std::move(doi), std::move(stage), std::move(reason)});
}

void SkipReport::append(std::span<const SkipRecord> records) {
  records_.insert(records_.end(), records.begin(), records.end());
}

std::size_t SkipReport::count(std::string_view stage) const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [&](const SkipRecord& r) { return r.stage == stage; }));
}

void SkipReport::write_csv(const std::filesystem::path& path) const {
  CsvWriter out(path, {"doi", "stage", "reason"});
  for (const auto& r : records_) out.row({r.doi, r.stage, r.reason});
}

FilterResult filter_dois(std::span<const ListingEntry> entries, int min_pages) {
  if (min_pages < 1) throw Error(ErrorKind::InvalidArgument, "min_pages must be >= 1");
  FilterResult result;
  std::unordered_set<std::string> seen;
  auto exclude = [&](const ListingEntry& e, const char* reason) {
    result.exclusions.push_back({e.doi, "filter", reason});
  };
  for (const auto& e : entries) {
    if (e.record_type != "inproceedings" && e.record_type != "article" &&
        e.record_type != "incollection") {
      exclude(e, "proceedings_record");
    } else if (e.flags.workshop) {
      exclude(e, "workshop");
    } else if (e.flags.short_paper) {
      exclude(e, "short");
    } else if (e.flags.poster) {
      exclude(e, "poster");
    } else if (e.doi.empty()) {
      exclude(e, "no_doi");
    } else if (auto pc = e.page_count(); pc && *pc < min_pages) {
      exclude(e, "too_few_pages");
    } else if (!seen.insert(e.doi).second) {
      exclude(e, "duplicate");
    } else {
      result.dois.push_back(e.doi);
    }
  }
  return result;
}

}  // namespace scholarmetrics::harvest
