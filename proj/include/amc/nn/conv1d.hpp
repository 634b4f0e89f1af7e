#pragma once

#include <cstddef>

#include "amc/nn/tensor.hpp"

namespace amc::nn {

// 1-D cross-correlation over batch x channels x length tensors.
template <typename T>
struct Conv1dLayer {
  BasicTensor<T> weight;  // out_ch x in_ch x kernel
  BasicTensor<T> bias;    // out_ch
  std::size_t stride = 1;
  std::size_t padding = 0;

  Conv1dLayer() = default;
  Conv1dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t kernel, std::size_t stride,
              std::size_t padding);

  std::size_t out_channels() const { return weight.dim(0); }
  std::size_t in_channels() const { return weight.dim(1); }
  std::size_t kernel_size() const { return weight.dim(2); }

  // floor((length + 2 * padding - kernel) / stride) + 1; throws ShapeError when < 1.
  std::size_t output_length(std::size_t length) const;
};

template <typename T>
struct Conv1dGrads {
  BasicTensor<T> input;
  BasicTensor<T> weight;
  BasicTensor<T> bias;
};

// out[b,o,t] = bias[o] + sum_{c,j} weight[o,c,j] * padded[b,c,t*stride + j]
template <typename T>
BasicTensor<T> conv1d_forward(const Conv1dLayer<T>& layer, const BasicTensor<T>& input);

// `input` is the tensor given to the matching forward call. Weight and bias
// gradients are summed over the batch in a fixed order.
template <typename T>
Conv1dGrads<T> conv1d_backward(const Conv1dLayer<T>& layer, const BasicTensor<T>& input,
                               const BasicTensor<T>& grad_out);

}  // namespace amc::nn
