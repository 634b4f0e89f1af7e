#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "amc/nn/msnet.hpp"
#include "amc/nn/tensor.hpp"
#include "amc/signalgen/dataset.hpp"

namespace amc::eval {

using signalgen::Dataset;
using signalgen::IQFrame;

// Frames picked by `indices`, stacked into count x 2 x N.
nn::Tensor stack_frames(const Dataset& dataset, std::span<const std::size_t> indices);

// Index of the largest entry per row; ties go to the lowest index.
std::vector<int> argmax_rows(const nn::Tensor& logits);

// Inference-mode forward in batches of `batch_size` frames.
inline constexpr std::size_t kInferenceBatch = 256;

// Most probable class per frame (argmax of the logits, which is also the
// argmax of the softmax posteriors).
std::vector<int> predict(const nn::MSNetParams<float>& params, const Dataset& dataset,
                         std::size_t batch_size = kInferenceBatch);

struct Metrics {
  std::size_t total = 0;
  std::size_t correct = 0;
  double overall_accuracy = 0.0;
  std::map<int, double> per_snr_accuracy;
  std::map<int, std::size_t> per_snr_count;
  std::vector<std::vector<std::size_t>> confusion;  // rows true class, columns predicted

  std::size_t num_classes() const { return confusion.size(); }
};

// Throws ValueError on mismatched lengths or a class id >= num_classes.
Metrics compute_metrics(std::span<const int> truth, std::span<const int> predicted, std::span<const int> snr_db,
                        std::size_t num_classes);

// Throws ValueError on an empty dataset.
Metrics evaluate(const nn::MSNetParams<float>& params, const Dataset& dataset);

}  // namespace amc::eval
