#pragma once

#include <array>
#include <cstddef>

#include "amc/nn/batchnorm.hpp"
#include "amc/nn/conv1d.hpp"
#include "amc/nn/tensor.hpp"

namespace amc::nn {

// conv -> batch norm -> ReLU
template <typename T>
struct ConvBnRelu {
  Conv1dLayer<T> conv;
  BatchNormLayer<T> bn;
};

template <typename T>
struct ConvBnReluCache {
  BasicTensor<T> input;
  BatchNormCache<T> bn;
  BasicTensor<T> pre_activation;
};

template <typename T>
struct ConvBnReluBackward {
  ConvBnRelu<T> grads;  // running statistics left empty
  BasicTensor<T> grad_input;
};

template <typename T>
BasicTensor<T> conv_bn_relu_forward(const ConvBnRelu<T>& block, const BasicTensor<T>& input, Mode mode,
                                    ConvBnReluCache<T>* cache);

template <typename T>
ConvBnReluBackward<T> conv_bn_relu_backward(const ConvBnRelu<T>& block, const ConvBnReluCache<T>& cache,
                                            const BasicTensor<T>& grad_out);

// One multi-scale branch: k x 1 conv block followed by a 1 x 1 gather block.
template <typename T>
struct MsBranch {
  ConvBnRelu<T> spatial;
  ConvBnRelu<T> gather;
};

inline constexpr std::array<std::size_t, 4> kBranchKernels = {1, 3, 5, 7};

// Multi-scale module: a 3 x 1 stride-2 reduce block C feeding four parallel
// branches B_i with kernels 1/3/5/7 (same padding), concatenated along the
// channel axis: y = concat(B_1(C(x)), ..., B_4(C(x))).
template <typename T>
struct MsModule {
  ConvBnRelu<T> reduce;
  std::array<MsBranch<T>, 4> branches;

  std::size_t in_channels() const { return reduce.conv.in_channels(); }
  std::size_t branch_channels() const { return branches[0].gather.conv.out_channels(); }
  std::size_t out_channels() const { return 4 * branch_channels(); }
};

// Zero conv weights and biases, unit-gamma batch norms.
template <typename T>
MsModule<T> make_ms_module(std::size_t in_channels, std::size_t reduce_channels, std::size_t branch_channels);

template <typename T>
struct MsModuleCache {
  ConvBnReluCache<T> reduce;
  std::array<ConvBnReluCache<T>, 4> spatial;
  std::array<ConvBnReluCache<T>, 4> gather;
};

template <typename T>
struct MsModuleBackward {
  MsModule<T> grads;
  BasicTensor<T> grad_input;
};

// `cache` is required in train mode and may be null in infer mode.
template <typename T>
BasicTensor<T> ms_module_forward(const MsModule<T>& module, const BasicTensor<T>& input, Mode mode,
                                 MsModuleCache<T>* cache);

template <typename T>
MsModuleBackward<T> ms_module_backward(const MsModule<T>& module, const MsModuleCache<T>& cache,
                                       const BasicTensor<T>& grad_out);

template <typename T>
void update_running_stats(MsModule<T>& module, const MsModuleCache<T>& cache);

// Copies channels [first, first + count) of a batch x C x L tensor.
template <typename T>
BasicTensor<T> slice_channels(const BasicTensor<T>& input, std::size_t first, std::size_t count);

}  // namespace amc::nn
