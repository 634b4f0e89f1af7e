#include "amc/train/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "amc/common/error.hpp"

namespace amc::train {

DatasetSplit split_stratified(const signalgen::Dataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ValueError("split_stratified: train fraction must lie in (0, 1]");
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& f = dataset.frames[i];
    groups[{f.class_id, f.snr_db}].push_back(i);
  }

  DatasetSplit split;
  for (auto* part : {&split.train, &split.test}) {
    part->frame_len = dataset.frame_len;
    part->class_names = dataset.class_names;
  }
  std::mt19937_64 rng(seed ^ 0xA5A5A5A55A5A5A5Aull);
  for (auto& [key, indices] : groups) {
    std::shuffle(indices.begin(), indices.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(indices.size())));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      (k < n_train ? split.train : split.test).frames.push_back(dataset.frames[indices[k]]);
    }
  }
  return split;
}

}  // namespace amc::train
