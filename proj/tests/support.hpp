#pragma once

// Small builders shared by the unit tests.

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "scholarmetrics/corpus.hpp"
#include "scholarmetrics/harvest/openalex.hpp"

namespace smtest {

using namespace scholarmetrics;

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(SM_FIXTURE_DIR) / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct AuthorSpec {
  std::string id;
  std::string country = "unknown";
  bool industry = false;
  std::string affiliation = {};
};

inline Date date(const std::string& ymd) { return *parse_date(ymd); }

/// A target work in `subfield` (venue picked from the subfield).
inline WorkRecord work(std::string id, Subfield subfield, const std::string& pub,
                       std::vector<AuthorSpec> authors = {}, std::uint64_t citations = 0) {
  WorkRecord w;
  w.work_id = std::move(id);
  w.doi = normalize_doi("10.1/" + w.work_id);
  w.title = "Work " + w.work_id;
  w.venue_key = std::string(venues_of(subfield).front());
  w.subfield = subfield;
  w.pub_date = date(pub);
  w.citation_count = citations;
  for (auto& a : authors) {
    Authorship au;
    au.author_id = a.id;
    au.author_name = "Name " + a.id;
    au.country_code = a.country;
    au.is_industry = a.industry;
    au.raw_affiliation = a.affiliation;
    w.authorships.push_back(std::move(au));
  }
  return w;
}

/// A neighbor (reference or citer) with a primary discipline.
inline WorkRecord neighbor(std::string id, const std::string& discipline,
                           WorkRole role = WorkRole::Reference,
                           const std::string& pub = "2010-01-01") {
  WorkRecord w;
  w.work_id = std::move(id);
  w.title = "Neighbor " + w.work_id;
  w.role = role;
  w.pub_date = date(pub);
  if (!discipline.empty()) w.topics.push_back({discipline, true});
  return w;
}

inline void set_topic(WorkRecord& w, const std::string& discipline) {
  w.topics = {{discipline, true}};
}

inline Corpus corpus_of(std::vector<WorkRecord> works, int start = 2000, int end = 2024,
                        int width = 5) {
  return Corpus(std::move(works), make_window_partition(start, end, width), "test");
}

/// Serves canned bodies by URL prefix (query `mailto` ignored); counts calls.
class FakeTransport : public harvest::Transport {
 public:
  void on(std::string url_prefix, int status, std::string body = {}) {
    std::lock_guard lock(mutex_);
    routes_.push_back({std::move(url_prefix), {{status, std::move(body)}}});
  }
  /// Responses consumed in order; the last one repeats.
  void on_sequence(std::string url_prefix, std::vector<std::pair<int, std::string>> responses) {
    std::lock_guard lock(mutex_);
    routes_.push_back({std::move(url_prefix), std::move(responses)});
  }

  harvest::HttpResponse get(const std::string& url) override {
    std::lock_guard lock(mutex_);
    ++calls_;
    requested_.push_back(url);
    std::string key = url;
    if (auto pos = key.find("mailto="); pos != std::string::npos) key.erase(pos - 1);
    for (auto& r : routes_) {
      if (key == r.prefix || (r.prefix.ends_with('*') &&
                              key.starts_with(r.prefix.substr(0, r.prefix.size() - 1)))) {
        auto& seq = r.responses;
        auto [status, body] = seq.front();
        if (seq.size() > 1) seq.erase(seq.begin());
        return {status, body, status == 0 ? "connection refused" : ""};
      }
    }
    return {404, "", ""};
  }

  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }
  std::vector<std::string> requested() const {
    std::lock_guard lock(mutex_);
    return requested_;
  }

 private:
  struct Route {
    std::string prefix;
    std::vector<std::pair<int, std::string>> responses;
  };
  mutable std::mutex mutex_;
  std::vector<Route> routes_;
  std::size_t calls_ = 0;
  std::vector<std::string> requested_;
};

/// Minimal OpenAlex work JSON.
inline std::string openalex_work(const std::string& id, const std::string& doi,
                                 const std::string& pub, std::vector<std::string> refs = {},
                                 const std::string& discipline = "Artificial Intelligence",
                                 const std::string& type = "article",
                                 std::uint64_t cited_by = 0) {
  std::string r = "[";
  for (std::size_t i = 0; i < refs.size(); ++i) {
    r += (i ? ",\"https://openalex.org/" : "\"https://openalex.org/") + refs[i] + "\"";
  }
  r += "]";
  std::string doi_field = doi.empty() ? "null" : "\"https://doi.org/" + doi + "\"";
  return "{\"id\":\"https://openalex.org/" + id + "\",\"doi\":" + doi_field +
         ",\"title\":\"T " + id + "\",\"publication_date\":\"" + pub + "\",\"type\":\"" + type +
         "\",\"authorships\":[{\"author\":{\"id\":\"https://openalex.org/A" + id +
         "\",\"display_name\":\"Au " + id +
         "\"},\"countries\":[\"US\"],\"raw_affiliation_strings\":[\"Google Research, Mountain "
         "View\"]}],\"primary_topic\":{\"id\":\"T1\",\"subfield\":{\"display_name\":\"" +
         discipline + "\"}},\"topics\":[{\"id\":\"T1\",\"subfield\":{\"display_name\":\"" +
         discipline + "\"}}],\"referenced_works\":" + r +
         ",\"cited_by_count\":" + std::to_string(cited_by) + "}";
}

}  // namespace smtest
