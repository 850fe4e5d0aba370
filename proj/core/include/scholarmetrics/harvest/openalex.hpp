#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholarmetrics/corpus.hpp"
#include "scholarmetrics/harvest/industry.hpp"
#include "scholarmetrics/harvest/listing.hpp"

namespace scholarmetrics::harvest {

struct FetchPolicy {
  int max_concurrent_requests = 4;
  std::chrono::milliseconds min_request_interval{100};
  int max_retries = 5;
  double backoff = 2.0;
  std::string contact_email;
  /// Maximum citing works fetched per seed; 0 means unlimited.
  std::size_t citer_cap = 0;

  /// Throws InvalidArgument when out of range.
  void validate() const;
};

struct HttpResponse {
  int status = 0;  ///< 0 when the request never produced a response
  std::string body;
  std::string error;
};

/// Blocking GET. Implementations must be safe to call from several threads.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

/// cpp-httplib backed transport (HTTP and HTTPS).
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds{30});
  HttpResponse get(const std::string& url) override;

 private:
  std::chrono::seconds timeout_;
};

/// Response cache keyed by request identity ("doi:<doi>", "id:<W..>", ...).
/// Concurrent callers asking for the same key share one fetch. With a directory
/// the cache persists across runs, one file per key.
class ResponseCache {
 public:
  explicit ResponseCache(std::optional<std::filesystem::path> directory = std::nullopt);

  std::string get_or_fetch(const std::string& key, const std::function<std::string()>& fetch);
  std::optional<std::string> lookup(const std::string& key) const;
  std::size_t size() const;

 private:
  std::filesystem::path file_for(const std::string& key) const;

  std::optional<std::filesystem::path> directory_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_future<std::string>> entries_;
};

/// Spaces request starts at least `interval` apart across all threads.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}
  void acquire();

 private:
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_{};
};

/// A provider work object mapped onto the corpus model.
struct ParsedWork {
  WorkRecord record;
  std::string type;  ///< provider "type" field ("article", "proceedings", ...)
};

/// Maps one OpenAlex work JSON object. Authorship industry flags are set with
/// `keywords` when given. Throws SchemaError naming the offending field.
ParsedWork parse_openalex_work(std::string_view json_text, const IndustryKeywordList* keywords);

/// True for provider types that denote front matter rather than papers.
bool is_non_paper_type(std::string_view type);

class OpenAlexClient {
 public:
  OpenAlexClient(std::string base_url, FetchPolicy policy, ResponseCache& cache,
                 Transport& transport, const IndustryKeywordList* keywords = nullptr);

  /// Throws Error{NotFound} for unknown DOIs, Error{TransientError} once retries
  /// are exhausted, SchemaError for malformed payloads.
  ParsedWork fetch_work_metadata(std::string_view doi);
  ParsedWork fetch_work_by_id(std::string_view work_id);
  /// Every citing work of `work_id`, following cursor pagination up to the
  /// policy's citer cap.
  std::vector<ParsedWork> fetch_citers(std::string_view work_id);

  const FetchPolicy& policy() const noexcept { return policy_; }
  std::size_t network_calls() const noexcept { return network_calls_.load(); }

 private:
  std::string get_cached(const std::string& key, const std::string& url);
  std::string get_with_retry(const std::string& url);
  std::string with_mailto(std::string url) const;

  std::string base_url_;
  FetchPolicy policy_;
  ResponseCache& cache_;
  Transport& transport_;
  const IndustryKeywordList* keywords_;
  RateLimiter limiter_;
  std::atomic<std::size_t> network_calls_{0};
};

enum class ExpandMode { References, Citers, Both };

std::optional<ExpandMode> parse_expand_mode(std::string_view text);
std::string_view to_string(ExpandMode mode) noexcept;

struct ExpansionResult {
  /// Seeds first (input order), then neighbors sorted by work_id.
  std::vector<WorkRecord> works;
  SkipReport skips;
  /// False when some neighbor could not be resolved.
  bool complete = true;
};

/// One-hop expansion around target papers: references and/or citing works are
/// fetched, citer events (citing work, its publication date) are attached to
/// the seeds, and every work is deduplicated by work_id.
ExpansionResult expand_citation_neighborhood(std::span<const WorkRecord> seeds,
                                             OpenAlexClient& client, ExpandMode mode);

/// Runs `task(i)` for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task);

}  // namespace scholarmetrics::harvest
