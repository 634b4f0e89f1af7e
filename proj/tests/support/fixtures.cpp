#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace amc::fixture {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("amc_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

signalgen::GenConfig tiny_gen_config(std::uint64_t seed) {
  signalgen::GenConfig c;
  c.frames_per_class_per_snr = 12;
  c.snr_list = {10, 14};
  c.frame_len = 32;
  c.samples_per_symbol = 4;
  c.seed = seed;
  c.classes = {signalgen::Modulation::BPSK, signalgen::Modulation::QPSK, signalgen::Modulation::PAM4};
  return c;
}

}  // namespace amc::fixture
