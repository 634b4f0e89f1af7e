#pragma once

#include <cstddef>
#include <vector>

#include "amc/nn/tensor.hpp"

namespace amc::nn {

enum class Mode { Train, Infer };

// Per-channel normalization over (batch, time) for batch x C x L inputs, or
// over the batch for batch x C inputs.
template <typename T>
struct BatchNormLayer {
  BasicTensor<T> gamma;
  BasicTensor<T> beta;
  BasicTensor<T> running_mean;
  BasicTensor<T> running_var;
  T eps = T(1e-5);
  T momentum = T(0.1);

  BatchNormLayer() = default;
  explicit BatchNormLayer(std::size_t channels);

  std::size_t channels() const { return gamma.size(); }
};

// Batch statistics of one train-mode forward pass.
template <typename T>
struct BatchNormCache {
  BasicTensor<T> normalized;  // same shape as the input
  std::vector<T> mean;
  std::vector<T> var;  // biased
  std::vector<T> inv_std;
  std::size_t count = 0;  // values per channel
};

template <typename T>
struct BatchNormGrads {
  BasicTensor<T> input;
  BasicTensor<T> gamma;
  BasicTensor<T> beta;
};

// Train mode normalizes with batch statistics and fills `cache` (required);
// it needs batch >= 2 and throws ValueError otherwise. Infer mode uses the
// running statistics and ignores `cache`. The layer itself is never modified:
// apply update_running_stats with the cache to advance the running averages.
template <typename T>
BasicTensor<T> batchnorm_forward(const BatchNormLayer<T>& layer, const BasicTensor<T>& input, Mode mode,
                                 BatchNormCache<T>* cache);

// Exact gradient of the train-mode forward, including the paths through the
// batch mean and variance.
template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormLayer<T>& layer, const BatchNormCache<T>& cache,
                                     const BasicTensor<T>& grad_out);

// running <- (1 - momentum) * running + momentum * batch, using the unbiased
// batch variance for running_var.
template <typename T>
void update_running_stats(BatchNormLayer<T>& layer, const BatchNormCache<T>& cache);

}  // namespace amc::nn
