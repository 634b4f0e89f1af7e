#pragma once

#include <cstddef>

#include "amc/nn/tensor.hpp"

namespace amc::nn {

// out = input . weight + bias, with weight stored in_dim x out_dim so that
// column j is the classifier vector of output j.
template <typename T>
struct DenseLayer {
  BasicTensor<T> weight;  // in_dim x out_dim
  BasicTensor<T> bias;    // out_dim

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim) : weight({in_dim, out_dim}), bias({out_dim}) {}

  std::size_t in_dim() const { return weight.dim(0); }
  std::size_t out_dim() const { return weight.dim(1); }
};

template <typename T>
struct DenseGrads {
  BasicTensor<T> input;
  BasicTensor<T> weight;
  BasicTensor<T> bias;
};

template <typename T>
BasicTensor<T> dense_forward(const DenseLayer<T>& layer, const BasicTensor<T>& input);

template <typename T>
DenseGrads<T> dense_backward(const DenseLayer<T>& layer, const BasicTensor<T>& input, const BasicTensor<T>& grad_out);

}  // namespace amc::nn
