// SPDX-License-Identifier: Apache-2.0
#include "firmscan/llm_client.hpp"

#include <httplib.h>

#include <condition_variable>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>
#include <unordered_map>

#include "firmscan/errors.hpp"
#include "firmscan/hash.hpp"

namespace firmscan {

std::string build_classification_prompt(std::string_view description) {
  std::string prompt =
      "Classify the following vulnerability as \"not-memory-related\", "
      "\"spatial-memory-related\", \"temporal-memory-related\", or "
      "\"other-memory-related\". Respond with a JSON object with keys "
      "\"classification\" and \"reasoning\".\n\nDescription: ";
  prompt += description;
  return prompt;
}

namespace {

struct ParsedEndpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/classify
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("llm endpoint must be an http(s) URL: " + endpoint);
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {endpoint, "/"};
  }
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

/// Minimal token bucket; thread-safe.
class TokenBucket {
 public:
  explicit TokenBucket(double per_second)
      : rate_(per_second), capacity_(per_second > 0 ? per_second : 1), tokens_(capacity_) {}

  void acquire() {
    if (rate_ <= 0) return;
    for (;;) {
      {
        std::lock_guard lock(mu_);
        refill();
        if (tokens_ >= 1.0) {
          tokens_ -= 1.0;
          return;
        }
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }

 private:
  void refill() {
    auto now = std::chrono::steady_clock::now();
    std::chrono::duration<double> dt = now - last_;
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + dt.count() * rate_);
  }

  std::mutex mu_;
  double rate_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

/// Counting semaphore over a mutex: keeps at most n requests in flight.
class InFlightGate {
 public:
  explicit InFlightGate(int n) : available_(n > 0 ? n : 1) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }
  void release() {
    std::lock_guard lock(mu_);
    ++available_;
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int available_;
};

}  // namespace

struct LlmClassifier::Impl {
  LlmClientConfig config;
  ParsedEndpoint endpoint;
  TokenBucket bucket;
  InFlightGate gate;

  std::mutex cache_mu;
  std::unordered_map<std::string, ClassificationResult> cache;

  std::mutex stats_mu;
  Stats stats;

  explicit Impl(LlmClientConfig cfg)
      : config(std::move(cfg)),
        endpoint(parse_endpoint(config.endpoint)),
        bucket(config.requests_per_second),
        gate(config.max_in_flight) {}

  ClassificationResult parse_response(const std::string& body) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw LlmError(LlmError::Kind::BadResponse,
                     std::string("llm: response is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("classification") || !doc.contains("reasoning") ||
        !doc["classification"].is_string() || !doc["reasoning"].is_string()) {
      throw LlmError(LlmError::Kind::BadResponse,
                     "llm: response lacks string keys \"classification\" and \"reasoning\"");
    }
    std::string label = doc["classification"].get<std::string>();
    auto cls = memory_class_from_label(label);
    if (!cls) {
      throw LlmError(LlmError::Kind::UnknownLabel, "llm: unknown classification label \"" + label +
                                                       "\"");
    }
    ClassificationResult r;
    r.mem_class = *cls;
    r.source = ClassificationSource::Llm;
    r.confidence = Confidence::High;
    r.reasoning = doc["reasoning"].get<std::string>();
    return r;
  }

  ClassificationResult request_once(const std::string& prompt) {
    httplib::Client cli(endpoint.base);
    cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(config.timeout));
    cli.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config.timeout));
    httplib::Headers headers;
    if (!config.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config.api_key);
    }
    nlohmann::json payload{
        {"model", config.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    auto res = cli.Post(endpoint.path, headers, payload.dump(), "application/json");
    if (!res) {
      throw LlmError(LlmError::Kind::Transport,
                     "llm: transport failure: " + httplib::to_string(res.error()));
    }
    if (res->status == 429) {
      throw LlmError(LlmError::Kind::RateLimited, "llm: endpoint rate-limited the request (429)");
    }
    if (res->status >= 500) {
      throw LlmError(LlmError::Kind::Transport,
                     "llm: server error " + std::to_string(res->status));
    }
    if (res->status != 200) {
      throw LlmError(LlmError::Kind::BadResponse,
                     "llm: unexpected status " + std::to_string(res->status));
    }
    return parse_response(res->body);
  }
};

LlmClassifier::LlmClassifier(LlmClientConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

LlmClassifier::~LlmClassifier() = default;

ClassificationResult LlmClassifier::classify(std::string_view description) {
  if (description.empty()) {
    throw LlmError(LlmError::Kind::BadResponse, "llm: refusing to classify an empty description");
  }
  std::string key = sha256_hex(description);
  {
    std::lock_guard lock(impl_->cache_mu);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end()) {
      std::lock_guard slock(impl_->stats_mu);
      ++impl_->stats.cache_hits;
      return it->second;
    }
  }

  std::string prompt = build_classification_prompt(description);
  impl_->gate.acquire();
  struct Release {
    InFlightGate& g;
    ~Release() { g.release(); }
  } release{impl_->gate};

  {
    std::lock_guard slock(impl_->stats_mu);
    ++impl_->stats.calls;
  }

  auto backoff = impl_->config.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    impl_->bucket.acquire();
    {
      std::lock_guard slock(impl_->stats_mu);
      ++impl_->stats.attempts;
    }
    try {
      ClassificationResult result = impl_->request_once(prompt);
      std::lock_guard lock(impl_->cache_mu);
      impl_->cache.emplace(key, result);  // last write wins; results are
                                          // deterministic per key
      return result;
    } catch (const LlmError& e) {
      bool retryable =
          e.kind == LlmError::Kind::Transport || e.kind == LlmError::Kind::RateLimited;
      if (!retryable || attempt >= impl_->config.max_attempts) throw;
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
}

LlmClassifier::Stats LlmClassifier::stats() const {
  std::lock_guard lock(impl_->stats_mu);
  return impl_->stats;
}

}  // namespace firmscan
