#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scholarmetrics/corpus.hpp"

namespace scholarmetrics {

/// JSON-lines persistence for WorkRecords. One object per line, UTF-8.
/// Unknown fields are ignored on read; missing optional fields take defaults.
std::string work_to_json_line(const WorkRecord& work);
WorkRecord work_from_json_line(std::string_view line);

void write_works_jsonl(std::ostream& out, std::span<const WorkRecord> works);
std::vector<WorkRecord> read_works_jsonl(std::istream& in);

void write_works_jsonl_file(const std::filesystem::path& path, std::span<const WorkRecord> works);
std::vector<WorkRecord> read_works_jsonl_file(const std::filesystem::path& path);

/// Sidecar next to a corpus file: window partition plus provenance.
struct CorpusManifest {
  std::vector<TimeWindow> windows;
  std::string provenance;
  /// Free-form provenance attributes (keyword-file hash, fetch policy, ...).
  std::map<std::string, std::string> attributes;
};

std::filesystem::path manifest_path_for(const std::filesystem::path& corpus_path);

void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::filesystem::path& path);

/// Writes `<path>` and `<path>.manifest.json`.
void save_corpus(const std::filesystem::path& path, const Corpus& corpus,
                 const std::map<std::string, std::string>& attributes = {});

/// Reads a corpus and its manifest sidecar.
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace scholarmetrics
