#include "scholarmetrics/harvest/openalex.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::harvest {

namespace {

using nlohmann::json;

constexpr std::string_view kNotFoundBody = R"({"__not_found__":true})";
constexpr std::string_view kOpenAlexPrefix = "https://openalex.org/";
constexpr int kCitersPerPage = 200;

std::string strip_openalex_prefix(std::string_view id) {
  if (id.starts_with(kOpenAlexPrefix)) id.remove_prefix(kOpenAlexPrefix.size());
  return std::string{id};
}

std::string percent_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
      out.push_back(static_cast<char>(c));
    } else {
      out += fmt::format("%{:02X}", c);
    }
  }
  return out;
}

std::string string_at(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw SchemaError(path + "." + key, "expected a string");
  return it->get<std::string>();
}

const json* object_at(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  if (!it->is_object()) throw SchemaError(path + "." + key, "expected an object");
  return &*it;
}

const json* array_at(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  if (!it->is_array()) throw SchemaError(path + "." + key, "expected an array");
  return &*it;
}

std::string topic_discipline(const json& topic, const std::string& path) {
  if (const json* sub = object_at(topic, "subfield", path)) {
    return string_at(*sub, "display_name", path + ".subfield");
  }
  return {};
}

ParsedWork parse_work_object(const json& j, const IndustryKeywordList* keywords) {
  const std::string root = "$";
  if (!j.is_object()) throw SchemaError(root, "expected a work object");
  ParsedWork out;
  WorkRecord& w = out.record;
  w.work_id = strip_openalex_prefix(string_at(j, "id", root));
  if (w.work_id.empty()) throw SchemaError("$.id", "missing work id");
  w.doi = normalize_doi(string_at(j, "doi", root));
  w.title = string_at(j, "title", root);
  if (w.title.empty()) w.title = string_at(j, "display_name", root);
  w.pub_date = parse_date(string_at(j, "publication_date", root));
  out.type = string_at(j, "type", root);

  if (const json* arr = array_at(j, "authorships", root)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const json& aj = (*arr)[i];
      std::string path = fmt::format("$.authorships[{}]", i);
      if (!aj.is_object()) throw SchemaError(path, "expected an object");
      Authorship a;
      if (const json* author = object_at(aj, "author", path)) {
        a.author_id = strip_openalex_prefix(string_at(*author, "id", path + ".author"));
        a.author_name = string_at(*author, "display_name", path + ".author");
      }
      std::vector<std::string> raw;
      if (const json* strings = array_at(aj, "raw_affiliation_strings", path)) {
        for (std::size_t k = 0; k < strings->size(); ++k) {
          if (!(*strings)[k].is_string()) {
            throw SchemaError(fmt::format("{}.raw_affiliation_strings[{}]", path, k),
                              "expected a string");
          }
          raw.push_back((*strings)[k].get<std::string>());
        }
      }
      if (raw.empty()) {
        auto single = string_at(aj, "raw_affiliation_string", path);
        if (!single.empty()) raw.push_back(single);
      }
      for (std::size_t k = 0; k < raw.size(); ++k) {
        if (k) a.raw_affiliation += "; ";
        a.raw_affiliation += raw[k];
      }
      std::string institution_country;
      if (const json* insts = array_at(aj, "institutions", path)) {
        for (std::size_t k = 0; k < insts->size(); ++k) {
          std::string ipath = fmt::format("{}.institutions[{}]", path, k);
          if (!(*insts)[k].is_object()) throw SchemaError(ipath, "expected an object");
          auto name = string_at((*insts)[k], "display_name", ipath);
          if (!name.empty()) a.institutions.push_back(name);
          if (institution_country.empty()) {
            institution_country = string_at((*insts)[k], "country_code", ipath);
          }
        }
      }
      std::string country;
      if (const json* countries = array_at(aj, "countries", path)) {
        if (!countries->empty() && (*countries)[0].is_string()) {
          country = (*countries)[0].get<std::string>();
        }
      }
      if (country.empty()) country = institution_country;
      a.country_code = country.empty() ? std::string{kUnknownCountry} : country;
      if (keywords) {
        std::string basis = a.raw_affiliation;
        if (basis.empty()) {
          for (const auto& inst : a.institutions) basis += inst + "; ";
        }
        a.is_industry = classify_industry(basis, *keywords);
      }
      w.authorships.push_back(std::move(a));
    }
  }

  std::string primary_id;
  std::string primary_discipline;
  if (const json* primary = object_at(j, "primary_topic", root)) {
    primary_id = string_at(*primary, "id", "$.primary_topic");
    primary_discipline = topic_discipline(*primary, "$.primary_topic");
  }
  bool primary_seen = false;
  if (const json* topics = array_at(j, "topics", root)) {
    for (std::size_t i = 0; i < topics->size(); ++i) {
      std::string path = fmt::format("$.topics[{}]", i);
      const json& tj = (*topics)[i];
      if (!tj.is_object()) throw SchemaError(path, "expected an object");
      Topic t;
      t.discipline = topic_discipline(tj, path);
      t.is_primary = !primary_seen && !primary_id.empty() && string_at(tj, "id", path) == primary_id;
      primary_seen = primary_seen || t.is_primary;
      if (!t.discipline.empty()) w.topics.push_back(std::move(t));
    }
  }
  if (!primary_seen && !primary_discipline.empty()) {
    w.topics.insert(w.topics.begin(), Topic{primary_discipline, true});
  }

  if (const json* refs = array_at(j, "referenced_works", root)) {
    for (std::size_t i = 0; i < refs->size(); ++i) {
      if (!(*refs)[i].is_string()) {
        throw SchemaError(fmt::format("$.referenced_works[{}]", i), "expected a string");
      }
      w.referenced_ids.push_back(strip_openalex_prefix((*refs)[i].get<std::string>()));
    }
  }
  if (auto it = j.find("cited_by_count"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      throw SchemaError("$.cited_by_count", "expected a nonnegative integer");
    }
    w.citation_count = it->get<std::uint64_t>();
  }
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", fmt::format("payload is not JSON (byte {})", e.byte));
  }
}

}  // namespace

void FetchPolicy::validate() const {
  if (max_concurrent_requests < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_concurrent_requests must be >= 1");
  }
  if (min_request_interval.count() <= 0) {
    throw Error(ErrorKind::InvalidArgument, "min_request_interval must be > 0");
  }
  if (max_retries < 0 || max_retries > 10) {
    throw Error(ErrorKind::InvalidArgument, "max_retries must be within [0, 10]");
  }
  if (!(backoff >= 1.0)) throw Error(ErrorKind::InvalidArgument, "backoff must be >= 1");
}

ParsedWork parse_openalex_work(std::string_view json_text, const IndustryKeywordList* keywords) {
  return parse_work_object(parse_json(json_text), keywords);
}

bool is_non_paper_type(std::string_view type) {
  return type == "proceedings" || type == "editorial" || type == "paratext" ||
         type == "erratum" || type == "retraction";
}

OpenAlexClient::OpenAlexClient(std::string base_url, FetchPolicy policy, ResponseCache& cache,
                               Transport& transport, const IndustryKeywordList* keywords)
    : base_url_(std::move(base_url)),
      policy_(std::move(policy)),
      cache_(cache),
      transport_(transport),
      keywords_(keywords),
      limiter_(policy_.min_request_interval) {
  policy_.validate();
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::string OpenAlexClient::with_mailto(std::string url) const {
  if (policy_.contact_email.empty()) return url;
  url += url.find('?') == std::string::npos ? '?' : '&';
  return url + "mailto=" + percent_encode(policy_.contact_email);
}

std::string OpenAlexClient::get_with_retry(const std::string& url) {
  HttpResponse last;
  for (int attempt = 0;; ++attempt) {
    limiter_.acquire();
    ++network_calls_;
    last = transport_.get(url);
    if (last.status == 200) return last.body;
    if (last.status == 404) return std::string{kNotFoundBody};
    const bool retryable = last.status == 0 || last.status == 429 || last.status >= 500;
    if (!retryable) {
      throw Error(ErrorKind::NotFound, fmt::format("HTTP {} for {}", last.status, url));
    }
    if (attempt >= policy_.max_retries) break;
    auto delay = std::chrono::duration<double, std::milli>(
        static_cast<double>(policy_.min_request_interval.count()) *
        std::pow(policy_.backoff, attempt + 1));
    std::this_thread::sleep_for(delay);
  }
  throw Error(ErrorKind::TransientError,
              fmt::format("giving up on {} after {} retries (last status {}{}{})", url,
                          policy_.max_retries, last.status, last.error.empty() ? "" : ": ",
                          last.error));
}

std::string OpenAlexClient::get_cached(const std::string& key, const std::string& url) {
  std::string body = cache_.get_or_fetch(key, [&] { return get_with_retry(with_mailto(url)); });
  if (body == kNotFoundBody) throw Error(ErrorKind::NotFound, key);
  return body;
}

ParsedWork OpenAlexClient::fetch_work_metadata(std::string_view doi) {
  std::string normalized = normalize_doi(doi);
  std::string body = get_cached("doi:" + normalized,
                                base_url_ + "/works/doi:" + percent_encode(normalized));
  return parse_openalex_work(body, keywords_);
}

ParsedWork OpenAlexClient::fetch_work_by_id(std::string_view work_id) {
  std::string id = strip_openalex_prefix(work_id);
  std::string body = get_cached("id:" + id, base_url_ + "/works/" + percent_encode(id));
  return parse_openalex_work(body, keywords_);
}

std::vector<ParsedWork> OpenAlexClient::fetch_citers(std::string_view work_id) {
  std::string id = strip_openalex_prefix(work_id);
  std::vector<ParsedWork> out;
  std::string cursor = "*";
  while (!cursor.empty()) {
    std::string url = fmt::format("{}/works?filter=cites:{}&per-page={}&cursor={}", base_url_,
                                  percent_encode(id), kCitersPerPage, percent_encode(cursor));
    json page = parse_json(get_cached(fmt::format("citers:{}:{}", id, cursor), url));
    const json* results = array_at(page, "results", "$");
    if (!results) throw SchemaError("$.results", "missing citers page results");
    for (const auto& r : *results) {
      out.push_back(parse_work_object(r, keywords_));
      if (policy_.citer_cap && out.size() >= policy_.citer_cap) return out;
    }
    cursor.clear();
    if (const json* meta = object_at(page, "meta", "$"); meta && !results->empty()) {
      cursor = string_at(*meta, "next_cursor", "$.meta");
    }
  }
  return out;
}

std::optional<ExpandMode> parse_expand_mode(std::string_view text) {
  for (ExpandMode m : {ExpandMode::References, ExpandMode::Citers, ExpandMode::Both}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

std::string_view to_string(ExpandMode mode) noexcept {
  switch (mode) {
    case ExpandMode::References: return "references";
    case ExpandMode::Citers: return "citers";
    case ExpandMode::Both: return "both";
  }
  return "?";
}

namespace {

std::string skip_reason(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::TransientError: return "transient";
    case ErrorKind::SchemaError: return "schema";
    default: return to_string(e.kind());
  }
}

}  // namespace

ExpansionResult expand_citation_neighborhood(std::span<const WorkRecord> seeds,
                                             OpenAlexClient& client, ExpandMode mode) {
  ExpansionResult result;
  result.works.assign(seeds.begin(), seeds.end());
  std::map<std::string, std::size_t> seed_index;
  for (std::size_t i = 0; i < result.works.size(); ++i) {
    result.works[i].role = WorkRole::Target;
    seed_index.emplace(result.works[i].work_id, i);
  }
  const int workers = client.policy().max_concurrent_requests;
  std::map<std::string, WorkRecord> neighbors;

  if (mode != ExpandMode::Citers) {
    std::set<std::string> wanted;
    for (const auto& s : seeds) {
      for (const auto& id : s.referenced_ids) {
        if (!seed_index.contains(id)) wanted.insert(id);
      }
    }
    std::vector<std::string> ids(wanted.begin(), wanted.end());
    std::vector<std::optional<ParsedWork>> fetched(ids.size());
    std::vector<std::string> errors(ids.size());
    parallel_for(ids.size(), workers, [&](std::size_t i) {
      try {
        fetched[i] = client.fetch_work_by_id(ids[i]);
      } catch (const Error& e) {
        errors[i] = skip_reason(e);
      }
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!fetched[i]) {
        result.skips.add(ids[i], "expand_reference", errors[i]);
        result.complete = false;
        continue;
      }
      WorkRecord rec = std::move(fetched[i]->record);
      rec.role = WorkRole::Reference;
      std::string id = rec.work_id;
      neighbors.try_emplace(id, std::move(rec));
    }
  }

  if (mode != ExpandMode::References) {
    std::vector<std::vector<ParsedWork>> citers(seeds.size());
    std::vector<std::string> errors(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t i) {
      try {
        citers[i] = client.fetch_citers(seeds[i].work_id);
      } catch (const Error& e) {
        errors[i] = skip_reason(e);
      }
    });
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!errors[i].empty()) {
        result.skips.add(seeds[i].doi.empty() ? seeds[i].work_id : seeds[i].doi, "expand_citers",
                         errors[i]);
        result.complete = false;
        continue;
      }
      WorkRecord& seed = result.works[i];
      std::set<std::string> have;
      for (const auto& e : seed.citer_events) have.insert(e.work_id);
      for (auto& parsed : citers[i]) {
        WorkRecord& citing = parsed.record;
        if (citing.pub_date && have.insert(citing.work_id).second) {
          seed.citer_events.push_back({citing.work_id, *citing.pub_date});
        }
        if (!seed_index.contains(citing.work_id)) {
          citing.role = WorkRole::Citer;
          std::string id = citing.work_id;
          neighbors.try_emplace(id, std::move(citing));
        }
      }
      std::stable_sort(seed.citer_events.begin(), seed.citer_events.end(),
                       [](const CitationEvent& a, const CitationEvent& b) {
                         return std::tie(a.date, a.work_id) < std::tie(b.date, b.work_id);
                       });
      seed.citation_count = std::max<std::uint64_t>(seed.citation_count, seed.citer_events.size());
    }
  }

  for (auto& [id, rec] : neighbors) result.works.push_back(std::move(rec));
  return result;
}

}  // namespace scholarmetrics::harvest
