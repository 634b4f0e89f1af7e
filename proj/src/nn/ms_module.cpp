#include "amc/nn/ms_module.hpp"

#include <algorithm>
#include <string>

#include "amc/common/error.hpp"
#include "amc/nn/activations.hpp"

namespace amc::nn {
namespace {

template <typename T>
void write_channels(BasicTensor<T>& dst, const BasicTensor<T>& src, std::size_t first) {
  const std::size_t batch = src.dim(0), channels = src.dim(1), length = src.dim(2);
  const std::size_t dst_channels = dst.dim(1);
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(src.raw() + b * channels * length, channels * length,
                dst.raw() + (b * dst_channels + first) * length);
  }
}

}  // namespace

template <typename T>
BasicTensor<T> slice_channels(const BasicTensor<T>& input, std::size_t first, std::size_t count) {
  expect_rank(input, 3, "slice_channels");
  const std::size_t batch = input.dim(0), channels = input.dim(1), length = input.dim(2);
  if (first + count > channels) throw ShapeError("slice_channels: channel range out of bounds");
  BasicTensor<T> out({batch, count, length});
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(input.raw() + (b * channels + first) * length, count * length, out.raw() + b * count * length);
  }
  return out;
}

template <typename T>
BasicTensor<T> conv_bn_relu_forward(const ConvBnRelu<T>& block, const BasicTensor<T>& input, Mode mode,
                                    ConvBnReluCache<T>* cache) {
  auto conv_out = conv1d_forward(block.conv, input);
  if (mode == Mode::Infer) return relu(batchnorm_forward(block.bn, conv_out, Mode::Infer, static_cast<BatchNormCache<T>*>(nullptr)));
  if (cache == nullptr) throw ValueError("conv_bn_relu: train mode needs a cache");
  cache->input = input;
  cache->pre_activation = batchnorm_forward(block.bn, conv_out, Mode::Train, &cache->bn);
  return relu(cache->pre_activation);
}

template <typename T>
ConvBnReluBackward<T> conv_bn_relu_backward(const ConvBnRelu<T>& block, const ConvBnReluCache<T>& cache,
                                            const BasicTensor<T>& grad_out) {
  auto bn_grads = batchnorm_backward(block.bn, cache.bn, relu_backward(cache.pre_activation, grad_out));
  auto conv_grads = conv1d_backward(block.conv, cache.input, bn_grads.input);
  ConvBnReluBackward<T> out;
  out.grads.conv.weight = std::move(conv_grads.weight);
  out.grads.conv.bias = std::move(conv_grads.bias);
  out.grads.conv.stride = block.conv.stride;
  out.grads.conv.padding = block.conv.padding;
  out.grads.bn.gamma = std::move(bn_grads.gamma);
  out.grads.bn.beta = std::move(bn_grads.beta);
  out.grad_input = std::move(conv_grads.input);
  return out;
}

template <typename T>
MsModule<T> make_ms_module(std::size_t in_channels, std::size_t reduce_channels, std::size_t branch_channels) {
  MsModule<T> m;
  m.reduce = {Conv1dLayer<T>(in_channels, reduce_channels, 3, 2, 1), BatchNormLayer<T>(reduce_channels)};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t k = kBranchKernels[i];
    m.branches[i].spatial = {Conv1dLayer<T>(reduce_channels, branch_channels, k, 1, (k - 1) / 2),
                             BatchNormLayer<T>(branch_channels)};
    m.branches[i].gather = {Conv1dLayer<T>(branch_channels, branch_channels, 1, 1, 0),
                            BatchNormLayer<T>(branch_channels)};
  }
  return m;
}

template <typename T>
BasicTensor<T> ms_module_forward(const MsModule<T>& module, const BasicTensor<T>& input, Mode mode,
                                 MsModuleCache<T>* cache) {
  expect_rank(input, 3, "ms_module");
  if (input.dim(1) != module.in_channels()) {
    throw ShapeError("ms_module: input has " + std::to_string(input.dim(1)) + " channels, module expects " +
                     std::to_string(module.in_channels()));
  }
  if (mode == Mode::Train && cache == nullptr) throw ValueError("ms_module: train mode needs a cache");
  const bool train = mode == Mode::Train;

  const auto reduced = conv_bn_relu_forward(module.reduce, input, mode, train ? &cache->reduce : nullptr);
  const std::size_t bc = module.branch_channels();
  BasicTensor<T> out({input.dim(0), 4 * bc, reduced.dim(2)});
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& branch = module.branches[i];
    auto mid = conv_bn_relu_forward(branch.spatial, reduced, mode, train ? &cache->spatial[i] : nullptr);
    auto y = conv_bn_relu_forward(branch.gather, mid, mode, train ? &cache->gather[i] : nullptr);
    write_channels(out, y, i * bc);
  }
  return out;
}

template <typename T>
MsModuleBackward<T> ms_module_backward(const MsModule<T>& module, const MsModuleCache<T>& cache,
                                       const BasicTensor<T>& grad_out) {
  const std::size_t bc = module.branch_channels();
  const auto& reduced_shape = cache.spatial[0].input.shape();
  expect_shape(grad_out, {reduced_shape[0], 4 * bc, reduced_shape[2]}, "ms_module_backward grad_out");

  MsModuleBackward<T> out;
  BasicTensor<T> grad_reduced(reduced_shape);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& branch = module.branches[i];
    auto g = conv_bn_relu_backward(branch.gather, cache.gather[i], slice_channels(grad_out, i * bc, bc));
    auto s = conv_bn_relu_backward(branch.spatial, cache.spatial[i], g.grad_input);
    for (std::size_t j = 0; j < grad_reduced.size(); ++j) grad_reduced[j] += s.grad_input[j];
    out.grads.branches[i].gather = std::move(g.grads);
    out.grads.branches[i].spatial = std::move(s.grads);
  }
  auto r = conv_bn_relu_backward(module.reduce, cache.reduce, grad_reduced);
  out.grads.reduce = std::move(r.grads);
  out.grad_input = std::move(r.grad_input);
  return out;
}

template <typename T>
void update_running_stats(MsModule<T>& module, const MsModuleCache<T>& cache) {
  update_running_stats(module.reduce.bn, cache.reduce.bn);
  for (std::size_t i = 0; i < 4; ++i) {
    update_running_stats(module.branches[i].spatial.bn, cache.spatial[i].bn);
    update_running_stats(module.branches[i].gather.bn, cache.gather[i].bn);
  }
}

#define AMC_INSTANTIATE_MS(T)                                                                                \
  template BasicTensor<T> slice_channels(const BasicTensor<T>&, std::size_t, std::size_t);                   \
  template BasicTensor<T> conv_bn_relu_forward(const ConvBnRelu<T>&, const BasicTensor<T>&, Mode,            \
                                               ConvBnReluCache<T>*);                                         \
  template ConvBnReluBackward<T> conv_bn_relu_backward(const ConvBnRelu<T>&, const ConvBnReluCache<T>&,      \
                                                       const BasicTensor<T>&);                               \
  template MsModule<T> make_ms_module(std::size_t, std::size_t, std::size_t);                                \
  template BasicTensor<T> ms_module_forward(const MsModule<T>&, const BasicTensor<T>&, Mode, MsModuleCache<T>*); \
  template MsModuleBackward<T> ms_module_backward(const MsModule<T>&, const MsModuleCache<T>&,               \
                                                  const BasicTensor<T>&);                                    \
  template void update_running_stats(MsModule<T>&, const MsModuleCache<T>&);

AMC_INSTANTIATE_MS(float)
AMC_INSTANTIATE_MS(double)

#undef AMC_INSTANTIATE_MS

}  // namespace amc::nn
