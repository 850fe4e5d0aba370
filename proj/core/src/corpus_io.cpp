#include "scholarmetrics/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics {

namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

constexpr std::string_view kManifestFormat = "scholarmetrics-corpus-manifest";
constexpr int kManifestVersion = 1;

// Typed field access with a path for error messages.
template <typename T>
T get_or(const json& obj, const char* key, const std::string& path, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(path + "." + key, e.what());
  }
}

const json* get_array(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  if (!it->is_array()) throw SchemaError(path + "." + key, "expected an array");
  return &*it;
}

}  // namespace

std::string work_to_json_line(const WorkRecord& w) {
  ojson j;
  j["work_id"] = w.work_id;
  j["doi"] = w.doi;
  j["title"] = w.title;
  j["venue_key"] = w.venue_key;
  j["subfield"] = w.subfield ? ojson(std::string{to_string(*w.subfield)}) : ojson(nullptr);
  j["pub_date"] = w.pub_date ? ojson(format_date(*w.pub_date)) : ojson(nullptr);
  ojson authorships = ojson::array();
  for (const auto& a : w.authorships) {
    ojson aj;
    aj["author_id"] = a.author_id;
    aj["author_name"] = a.author_name;
    aj["raw_affiliation_text"] = a.raw_affiliation;
    aj["country_code"] = a.country_code;
    aj["is_industry"] = a.is_industry;
    aj["institutions"] = a.institutions;
    authorships.push_back(std::move(aj));
  }
  j["authorships"] = std::move(authorships);
  ojson topics = ojson::array();
  for (const auto& t : w.topics) {
    topics.push_back({{"discipline_name", t.discipline}, {"is_primary", t.is_primary}});
  }
  j["topics"] = std::move(topics);
  j["referenced_ids"] = w.referenced_ids;
  ojson events = ojson::array();
  for (const auto& e : w.citer_events) {
    events.push_back({{"work_id", e.work_id}, {"citation_date", format_date(e.date)}});
  }
  j["citer_events"] = std::move(events);
  j["citation_count"] = w.citation_count;
  j["role"] = std::string{to_string(w.role)};
  return j.dump();
}

WorkRecord work_from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "invalid JSON object");
  }
  if (!j.is_object()) throw SchemaError("$", "expected an object");

  WorkRecord w;
  const std::string root = "$";
  w.work_id = get_or<std::string>(j, "work_id", root, "");
  if (w.work_id.empty()) throw SchemaError("$.work_id", "missing or empty");
  w.doi = normalize_doi(get_or<std::string>(j, "doi", root, ""));
  w.title = get_or<std::string>(j, "title", root, "");
  w.venue_key = get_or<std::string>(j, "venue_key", root, "");
  auto sub = get_or<std::string>(j, "subfield", root, "");
  if (!sub.empty()) {
    w.subfield = parse_subfield(sub);
    if (!w.subfield) throw SchemaError("$.subfield", "unknown subfield '" + sub + "'");
  }
  // Unparseable dates are kept as "no date" rather than rejected.
  w.pub_date = parse_date(get_or<std::string>(j, "pub_date", root, ""));

  if (const json* arr = get_array(j, "authorships", root)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& aj = (*arr)[i];
      std::string path = "$.authorships[" + std::to_string(i) + "]";
      if (!aj.is_object()) throw SchemaError(path, "expected an object");
      Authorship a;
      a.author_id = get_or<std::string>(aj, "author_id", path, "");
      a.author_name = get_or<std::string>(aj, "author_name", path, "");
      a.raw_affiliation = get_or<std::string>(aj, "raw_affiliation_text", path, "");
      a.country_code = get_or<std::string>(aj, "country_code", path, std::string{kUnknownCountry});
      if (a.country_code.empty()) a.country_code = kUnknownCountry;
      a.is_industry = get_or<bool>(aj, "is_industry", path, false);
      a.institutions = get_or<std::vector<std::string>>(aj, "institutions", path, {});
      w.authorships.push_back(std::move(a));
    }
  }
  if (const json* arr = get_array(j, "topics", root)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      std::string path = "$.topics[" + std::to_string(i) + "]";
      const auto& tj = (*arr)[i];
      if (!tj.is_object()) throw SchemaError(path, "expected an object");
      w.topics.push_back({get_or<std::string>(tj, "discipline_name", path, ""),
                          get_or<bool>(tj, "is_primary", path, false)});
    }
  }
  w.referenced_ids = get_or<std::vector<std::string>>(j, "referenced_ids", root, {});
  if (const json* arr = get_array(j, "citer_events", root)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      std::string path = "$.citer_events[" + std::to_string(i) + "]";
      const auto& ej = (*arr)[i];
      if (!ej.is_object()) throw SchemaError(path, "expected an object");
      auto date_text = get_or<std::string>(ej, "citation_date", path, "");
      auto date = parse_date(date_text);
      if (!date) throw SchemaError(path + ".citation_date", "invalid date '" + date_text + "'");
      w.citer_events.push_back({get_or<std::string>(ej, "work_id", path, ""), *date});
    }
  }
  w.citation_count = get_or<std::uint64_t>(j, "citation_count", root, 0);
  auto role = get_or<std::string>(j, "role", root, "target");
  auto parsed_role = parse_work_role(role);
  if (!parsed_role) throw SchemaError("$.role", "unknown role '" + role + "'");
  w.role = *parsed_role;
  return w;
}

void write_works_jsonl(std::ostream& out, std::span<const WorkRecord> works) {
  for (const auto& w : works) out << work_to_json_line(w) << '\n';
}

std::vector<WorkRecord> read_works_jsonl(std::istream& in) {
  std::vector<WorkRecord> works;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t line_start = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      works.push_back(work_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError(line_start + e.offset(), "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(line_no) + ":" + e.field_path(), e.what());
    }
  }
  return works;
}

void write_works_jsonl_file(const std::filesystem::path& path, std::span<const WorkRecord> works) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  write_works_jsonl(out, works);
}

std::vector<WorkRecord> read_works_jsonl_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return read_works_jsonl(in);
}

std::filesystem::path manifest_path_for(const std::filesystem::path& corpus_path) {
  auto p = corpus_path;
  p += ".manifest.json";
  return p;
}

void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest) {
  ojson j;
  j["format"] = kManifestFormat;
  j["version"] = kManifestVersion;
  ojson windows = ojson::array();
  for (const auto& w : manifest.windows) windows.push_back(w.label());
  j["windows"] = std::move(windows);
  j["provenance"] = manifest.provenance;
  j["attributes"] = manifest.attributes;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "manifest " + path.string() + " is not valid JSON");
  }
  CorpusManifest m;
  for (const auto& label : get_or<std::vector<std::string>>(j, "windows", "$", {})) {
    auto w = parse_window_label(label);
    if (!w) throw SchemaError("$.windows", "bad window label '" + label + "'");
    m.windows.push_back(*w);
  }
  m.provenance = get_or<std::string>(j, "provenance", "$", "");
  m.attributes = get_or<std::map<std::string, std::string>>(j, "attributes", "$", {});
  return m;
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus,
                 const std::map<std::string, std::string>& attributes) {
  write_works_jsonl_file(path, corpus.works());
  CorpusManifest m;
  m.windows.assign(corpus.windows().begin(), corpus.windows().end());
  m.provenance = corpus.provenance();
  m.attributes = attributes;
  write_manifest(manifest_path_for(path), m);
}

Corpus load_corpus(const std::filesystem::path& path) {
  auto manifest = read_manifest(manifest_path_for(path));
  return Corpus(read_works_jsonl_file(path), std::move(manifest.windows),
                std::move(manifest.provenance));
}

}  // namespace scholarmetrics
