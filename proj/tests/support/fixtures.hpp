#pragma once

#include <filesystem>
#include <string>

#include "amc/signalgen/dataset.hpp"

namespace amc::fixture {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& path);

// A few frames per (class, snr) of short frames, for fast training tests.
signalgen::GenConfig tiny_gen_config(std::uint64_t seed = 3);

}  // namespace amc::fixture
