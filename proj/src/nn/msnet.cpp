#include "amc/nn/msnet.hpp"

#include <cmath>
#include <random>
#include <string>

#include "amc/common/error.hpp"
#include "amc/nn/activations.hpp"

namespace amc::nn {

template <typename T>
MSNetParams<T> make_msnet(const MSNetConfig& config) {
  if (config.in_channels == 0 || config.reduce_channels == 0 || config.branch_channels == 0 ||
      config.feature_dim == 0 || config.num_classes == 0) {
    throw ShapeError("msnet: every layer width must be >= 1");
  }
  MSNetParams<T> p;
  p.config = config;
  p.ms1 = make_ms_module<T>(config.in_channels, config.reduce_channels, config.branch_channels);
  p.ms2 = make_ms_module<T>(config.module_channels(), config.reduce_channels, config.branch_channels);
  p.fc = DenseLayer<T>(config.module_channels(), config.feature_dim);
  p.classifier = DenseLayer<T>(config.feature_dim, config.num_classes);
  return p;
}

template <typename T>
MSNetParams<T> init_msnet(const MSNetConfig& config, std::uint64_t seed) {
  auto p = make_msnet<T>(config);
  std::mt19937_64 rng(seed);
  visit_tensors(p, [&](const std::string&, BasicTensor<T>& t, ParamKind kind) {
    if (kind != ParamKind::Weight) return;
    // conv weights are out x in x k, dense weights are in x out
    const std::size_t fan_in = t.rank() == 3 ? t.dim(1) * t.dim(2) : t.dim(0);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& v : t.data()) v = static_cast<T>(dist(rng));
  });
  return p;
}

template <typename T>
MSNetOutput<T> msnet_forward(const MSNetParams<T>& params, const BasicTensor<T>& batch, Mode mode) {
  expect_rank(batch, 3, "msnet");
  if (batch.dim(1) != params.config.in_channels) {
    throw ShapeError("msnet: input has " + std::to_string(batch.dim(1)) + " channels, network expects " +
                     std::to_string(params.config.in_channels));
  }
  if (batch.dim(2) < kMinFrameLength) {
    throw ShapeError("msnet: frame length " + std::to_string(batch.dim(2)) + " is below the minimum of " +
                     std::to_string(kMinFrameLength));
  }
  const bool train = mode == Mode::Train;
  MSNetOutput<T> out;
  auto& cache = out.cache;

  const auto m1 = ms_module_forward(params.ms1, batch, mode, train ? &cache.ms1 : nullptr);
  const auto m2 = ms_module_forward(params.ms2, m1, mode, train ? &cache.ms2 : nullptr);
  auto pooled = gap(m2);
  auto fc_out = dense_forward(params.fc, pooled);
  out.features = params.config.feature_relu ? relu(fc_out) : fc_out;
  out.logits = dense_forward(params.classifier, out.features);
  if (train) {
    cache.pooled_length = m2.dim(2);
    cache.pooled = std::move(pooled);
    cache.fc_out = std::move(fc_out);
    cache.features = out.features;
  }
  return out;
}

template <typename T>
MSNetParams<T> msnet_backward(const MSNetParams<T>& params, const MSNetCache<T>& cache,
                              const BasicTensor<T>& grad_logits, const BasicTensor<T>* grad_features,
                              BasicTensor<T>* grad_input) {
  if (cache.features.empty()) throw ValueError("msnet_backward: cache comes from an infer-mode pass");
  MSNetParams<T> grads;
  grads.config = params.config;

  auto cls = dense_backward(params.classifier, cache.features, grad_logits);
  grads.classifier.weight = std::move(cls.weight);
  grads.classifier.bias = std::move(cls.bias);

  auto g_features = std::move(cls.input);
  if (grad_features != nullptr) {
    expect_shape(*grad_features, g_features.shape(), "msnet_backward grad_features");
    for (std::size_t i = 0; i < g_features.size(); ++i) g_features[i] += (*grad_features)[i];
  }
  if (params.config.feature_relu) g_features = relu_backward(cache.fc_out, g_features);

  auto fc = dense_backward(params.fc, cache.pooled, g_features);
  grads.fc.weight = std::move(fc.weight);
  grads.fc.bias = std::move(fc.bias);

  auto g_m2 = gap_backward(fc.input, cache.pooled_length);
  auto b2 = ms_module_backward(params.ms2, cache.ms2, g_m2);
  grads.ms2 = std::move(b2.grads);
  auto b1 = ms_module_backward(params.ms1, cache.ms1, b2.grad_input);
  grads.ms1 = std::move(b1.grads);
  if (grad_input != nullptr) *grad_input = std::move(b1.grad_input);
  return grads;
}

template <typename T>
void update_running_stats(MSNetParams<T>& params, const MSNetCache<T>& cache) {
  update_running_stats(params.ms1, cache.ms1);
  update_running_stats(params.ms2, cache.ms2);
}

#define AMC_INSTANTIATE_MSNET(T)                                                                           \
  template MSNetParams<T> make_msnet(const MSNetConfig&);                                                  \
  template MSNetParams<T> init_msnet(const MSNetConfig&, std::uint64_t);                                   \
  template MSNetOutput<T> msnet_forward(const MSNetParams<T>&, const BasicTensor<T>&, Mode);               \
  template MSNetParams<T> msnet_backward(const MSNetParams<T>&, const MSNetCache<T>&, const BasicTensor<T>&, \
                                         const BasicTensor<T>*, BasicTensor<T>*);                          \
  template void update_running_stats(MSNetParams<T>&, const MSNetCache<T>&);

AMC_INSTANTIATE_MSNET(float)
AMC_INSTANTIATE_MSNET(double)

#undef AMC_INSTANTIATE_MSNET

}  // namespace amc::nn
