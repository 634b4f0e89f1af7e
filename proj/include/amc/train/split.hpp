#pragma once

#include <cstdint>

#include "amc/signalgen/dataset.hpp"

namespace amc::train {

struct DatasetSplit {
  signalgen::Dataset train;
  signalgen::Dataset test;
};

// Splits every (class, snr) group independently: a seeded shuffle, then the
// first round(train_fraction * group size) frames go to train. Groups are
// emitted in ascending (class, snr) order. Throws ValueError unless
// 0 < train_fraction <= 1.
DatasetSplit split_stratified(const signalgen::Dataset& dataset, double train_fraction, std::uint64_t seed);

}  // namespace amc::train
