#pragma once

#include "amc/nn/tensor.hpp"

namespace amc::nn {

// max(0, z) elementwise.
template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& z);

// Passes grad_out where z > 0; zero where z <= 0 (the subgradient at 0 is 0).
template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& z, const BasicTensor<T>& grad_out);

// Global average pooling: batch x C x L -> batch x C.
template <typename T>
BasicTensor<T> gap(const BasicTensor<T>& input);

// Spreads grad_out / L uniformly over the pooled length.
template <typename T>
BasicTensor<T> gap_backward(const BasicTensor<T>& grad_out, std::size_t length);

}  // namespace amc::nn
