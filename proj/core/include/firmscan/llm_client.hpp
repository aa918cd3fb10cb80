// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "firmscan/memclass.hpp"

namespace firmscan {

struct LlmClientConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8089/v1/classify
  std::string api_key;   // sent as a bearer token
  std::string model = "gpt-4o";
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds timeout{30'000};
  int max_in_flight = 4;
  /// Token-bucket rate limit in requests/second; 0 disables it.
  double requests_per_second = 0.0;
};

/// Builds the classification prompt for one vulnerability description.
std::string build_classification_prompt(std::string_view description);

/// Remote classification client. POSTs the prompt as a single user
/// message and expects the response body to be a strict JSON object
/// {"classification": <label>, "reasoning": <string>}. Transport failures
/// and 429/5xx responses are retried with exponential backoff up to
/// max_attempts; results are cached by description digest.
class LlmClassifier {
 public:
  explicit LlmClassifier(LlmClientConfig config);
  ~LlmClassifier();

  LlmClassifier(const LlmClassifier&) = delete;
  LlmClassifier& operator=(const LlmClassifier&) = delete;

  /// Throws LlmError{Transport, BadResponse, UnknownLabel, RateLimited}.
  ClassificationResult classify(std::string_view description);

  struct Stats {
    std::uint64_t calls = 0;
    std::uint64_t attempts = 0;
    std::uint64_t cache_hits = 0;
  };
  Stats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace firmscan
