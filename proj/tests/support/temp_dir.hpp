// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace fstest {

/// Self-deleting temp directory under the system temp path.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "firmscan-test") {
    std::random_device rd;
    std::uniform_int_distribution<std::uint64_t> dist;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(dist(rd)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& sub) const { return path_ / sub; }

 private:
  std::filesystem::path path_;
};

}  // namespace fstest
