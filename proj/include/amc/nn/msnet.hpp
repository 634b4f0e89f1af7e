#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "amc/nn/batchnorm.hpp"
#include "amc/nn/dense.hpp"
#include "amc/nn/ms_module.hpp"
#include "amc/nn/tensor.hpp"

namespace amc::nn {

struct MSNetConfig {
  std::size_t in_channels = 2;
  std::size_t reduce_channels = 32;
  std::size_t branch_channels = 32;
  std::size_t feature_dim = 128;
  std::size_t num_classes = 8;
  // ReLU on the middle FC output, so features are nonnegative.
  bool feature_relu = true;

  std::size_t module_channels() const { return 4 * branch_channels; }

  friend bool operator==(const MSNetConfig&, const MSNetConfig&) = default;
};

// Shortest input accepted by msnet_forward.
inline constexpr std::size_t kMinFrameLength = 8;

// MS module -> MS module -> GAP -> FC(feature_dim) -> ReLU -> FC(num_classes).
template <typename T>
struct MSNetParams {
  MSNetConfig config;
  MsModule<T> ms1;
  MsModule<T> ms2;
  DenseLayer<T> fc;          // module_channels x feature_dim
  DenseLayer<T> classifier;  // feature_dim x num_classes
};

// All weights zero, batch norms at identity.
template <typename T>
MSNetParams<T> make_msnet(const MSNetConfig& config);

// Kaiming-uniform (bound sqrt(6 / fan_in)) conv and dense weights, zero
// biases, gamma = 1 and beta = 0.
template <typename T>
MSNetParams<T> init_msnet(const MSNetConfig& config, std::uint64_t seed);

template <typename T>
struct MSNetCache {
  MsModuleCache<T> ms1;
  MsModuleCache<T> ms2;
  std::size_t pooled_length = 0;
  BasicTensor<T> pooled;
  BasicTensor<T> fc_out;
  BasicTensor<T> features;
};

template <typename T>
struct MSNetOutput {
  BasicTensor<T> features;  // batch x feature_dim, the vectors fed to the center loss
  BasicTensor<T> logits;    // batch x num_classes, pre-softmax
  MSNetCache<T> cache;      // populated in train mode only
};

// `batch` is m x in_channels x N with N >= kMinFrameLength.
template <typename T>
MSNetOutput<T> msnet_forward(const MSNetParams<T>& params, const BasicTensor<T>& batch, Mode mode);

// Gradients for every trainable tensor, laid out like the parameters (batch
// norm running statistics are left empty). `grad_features`, when given, is
// added to the gradient reaching the feature layer from the classifier.
template <typename T>
MSNetParams<T> msnet_backward(const MSNetParams<T>& params, const MSNetCache<T>& cache,
                              const BasicTensor<T>& grad_logits, const BasicTensor<T>* grad_features = nullptr,
                              BasicTensor<T>* grad_input = nullptr);

// Advances every batch norm's running statistics from a train-mode cache.
template <typename T>
void update_running_stats(MSNetParams<T>& params, const MSNetCache<T>& cache);

enum class ParamKind { Weight, Bias, BnGamma, BnBeta, BnRunningMean, BnRunningVar };

constexpr bool is_trainable(ParamKind k) noexcept {
  return k != ParamKind::BnRunningMean && k != ParamKind::BnRunningVar;
}
constexpr bool takes_weight_decay(ParamKind k) noexcept { return k == ParamKind::Weight || k == ParamKind::Bias; }

// Calls fn(name, tensor, kind) for every tensor in a stable order. Works on
// const and non-const parameter sets, and on gradient sets (whose running
// statistics are empty).
template <typename Block, typename Fn>
void visit_block(const std::string& prefix, Block& block, Fn&& fn) {
  fn(prefix + ".weight", block.conv.weight, ParamKind::Weight);
  fn(prefix + ".bias", block.conv.bias, ParamKind::Bias);
  fn(prefix + ".bn.gamma", block.bn.gamma, ParamKind::BnGamma);
  fn(prefix + ".bn.beta", block.bn.beta, ParamKind::BnBeta);
  fn(prefix + ".bn.running_mean", block.bn.running_mean, ParamKind::BnRunningMean);
  fn(prefix + ".bn.running_var", block.bn.running_var, ParamKind::BnRunningVar);
}

template <typename Module, typename Fn>
void visit_module(const std::string& prefix, Module& m, Fn&& fn) {
  visit_block(prefix + ".reduce", m.reduce, fn);
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string branch = prefix + ".branch" + std::to_string(i + 1);
    visit_block(branch + ".conv", m.branches[i].spatial, fn);
    visit_block(branch + ".gather", m.branches[i].gather, fn);
  }
}

template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
  visit_module("ms1", p.ms1, fn);
  visit_module("ms2", p.ms2, fn);
  fn(std::string("fc.weight"), p.fc.weight, ParamKind::Weight);
  fn(std::string("fc.bias"), p.fc.bias, ParamKind::Bias);
  fn(std::string("classifier.weight"), p.classifier.weight, ParamKind::Weight);
  fn(std::string("classifier.bias"), p.classifier.bias, ParamKind::Bias);
}

// Converts every tensor to another scalar type.
template <typename U, typename T>
MSNetParams<U> cast_params(const MSNetParams<T>& src) {
  auto dst = make_msnet<U>(src.config);
  std::vector<const BasicTensor<T>*> from;
  visit_tensors(src, [&](const std::string&, const BasicTensor<T>& t, ParamKind) { from.push_back(&t); });
  std::size_t i = 0;
  visit_tensors(dst, [&](const std::string&, BasicTensor<U>& t, ParamKind) {
    if (!from[i]->empty()) t = from[i]->template cast<U>();
    ++i;
  });
  return dst;
}

// Number of trainable scalars.
template <typename T>
std::size_t trainable_count(const MSNetParams<T>& params) {
  std::size_t n = 0;
  visit_tensors(params, [&](const std::string&, const BasicTensor<T>& t, ParamKind k) {
    if (is_trainable(k)) n += t.size();
  });
  return n;
}

}  // namespace amc::nn
