#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "amc/signalgen/dataset.hpp"
#include "amc/train/trainer.hpp"

namespace amc::cli {

struct RunConfig {
  signalgen::GenConfig gen;
  train::TrainConfig train;
  double train_fraction = 0.8;
  std::filesystem::path dataset = "dataset.bin";
  // Empty means <out_dir>/ckpt_s2.bin, or ckpt_s1.bin when S2 was skipped.
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir = ".";
  std::size_t threads = 0;  // 0 lets the scheduler decide

  // One seed drives generation, the split, initialization and shuffling.
  void set_seed(std::uint64_t seed);
  void validate() const;
  std::filesystem::path checkpoint_for_eval() const;
};

// Parses a JSON object. Unknown keys and wrongly typed values throw
// ConfigError naming the key.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// Values given on the command line; each mirrors a config key.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> lr;
  std::optional<std::size_t> epochs_stage1;
  std::optional<std::size_t> epochs_stage2;
  std::optional<std::size_t> batch_size;
  std::optional<std::vector<int>> snr_list;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> checkpoint;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

}  // namespace amc::cli
