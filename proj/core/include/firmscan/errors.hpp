// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace firmscan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- extraction --------------------------------------------------------

class RangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedCompressor : public Error {
 public:
  using Error::Error;
};

class CorruptSuperblock : public Error {
 public:
  using Error::Error;
};

class TruncatedImage : public Error {
 public:
  using Error::Error;
};

class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedArchive : public Error {
 public:
  using Error::Error;
};

class NoFilesystemFound : public Error {
 public:
  using Error::Error;
};

class AllExtractionsFailed : public Error {
 public:
  AllExtractionsFailed(const std::string& what, std::vector<std::string> per_hit)
      : Error(what), per_hit_errors(std::move(per_hit)) {}

  std::vector<std::string> per_hit_errors;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// -- inventory ---------------------------------------------------------

class InvalidAttribute : public Error {
 public:
  using Error::Error;
};

class MalformedCpe : public Error {
 public:
  using Error::Error;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

// -- vulnerability db --------------------------------------------------

class FeedParseError : public Error {
 public:
  using Error::Error;
};

class IndexVersionMismatch : public Error {
 public:
  using Error::Error;
};

class UnresolvedVersion : public Error {
 public:
  using Error::Error;
};

// -- classification ----------------------------------------------------

class MalformedCweId : public Error {
 public:
  using Error::Error;
};

class EmptyDescription : public Error {
 public:
  using Error::Error;
};

class RuleConflict : public Error {
 public:
  using Error::Error;
};

class LlmError : public Error {
 public:
  enum class Kind { Transport, BadResponse, UnknownLabel, RateLimited };

  LlmError(Kind k, const std::string& what) : Error(what), kind(k) {}

  Kind kind;
};

// -- analytics / cli ---------------------------------------------------

class EmptyLedger : public Error {
 public:
  using Error::Error;
};

class CsvParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace firmscan
