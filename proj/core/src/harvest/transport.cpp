#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "scholarmetrics/error.hpp"
#include "scholarmetrics/harvest/openalex.hpp"
#include "scholarmetrics/hash.hpp"

namespace scholarmetrics::harvest {

HttpTransport::HttpTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

HttpResponse HttpTransport::get(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return {0, {}, "not an absolute URL: " + url};
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_default_headers({{"User-Agent", "scholarmetrics/0.3"}});
  auto res = client.Get(path);
  if (!res) return {0, {}, httplib::to_string(res.error())};
  return {res->status, res->body, {}};
}

ResponseCache::ResponseCache(std::optional<std::filesystem::path> directory)
    : directory_(std::move(directory)) {
  if (directory_) std::filesystem::create_directories(*directory_);
}

std::filesystem::path ResponseCache::file_for(const std::string& key) const {
  return *directory_ / (sha256_hex(key) + ".json");
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second.get();
  }
  if (directory_) {
    std::ifstream in(file_for(key), std::ios::binary);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      return buf.str();
    }
  }
  return std::nullopt;
}

std::string ResponseCache::get_or_fetch(const std::string& key,
                                        const std::function<std::string()>& fetch) {
  std::promise<std::string> promise;
  std::shared_future<std::string> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      entries_.emplace(key, future);
      owner = true;
    }
  }
  if (!owner) return future.get();

  try {
    std::optional<std::string> body;
    if (directory_) {
      std::ifstream in(file_for(key), std::ios::binary);
      if (in) {
        std::stringstream buf;
        buf << in.rdbuf();
        body = buf.str();
      }
    }
    if (!body) {
      body = fetch();
      if (directory_) {
        auto path = file_for(key);
        auto tmp = path;
        tmp += ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          out << *body;
        }
        std::filesystem::rename(tmp, path);
      }
    }
    promise.set_value(*body);
    return *body;
  } catch (...) {
    // Failed fetches are not cached; a later call may retry.
    {
      std::lock_guard lock(mutex_);
      entries_.erase(key);
    }
    promise.set_exception(std::current_exception());
    throw;
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  if (n == 0) return;
  std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (count == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  {
    std::vector<std::jthread> threads;
    threads.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace scholarmetrics::harvest
