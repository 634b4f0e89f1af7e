#include "amc/nn/batchnorm.hpp"

#include <cmath>
#include <string>

#include "amc/common/error.hpp"
#include "amc/common/parallel.hpp"

namespace amc::nn {
namespace {

struct Layout {
  std::size_t batch, channels, length;
};

template <typename T>
Layout layout(const BatchNormLayer<T>& layer, const BasicTensor<T>& input) {
  if (input.rank() != 2 && input.rank() != 3) {
    throw ShapeError("batchnorm: expected rank 2 or 3 input, got " + shape_string(input.shape()));
  }
  const Layout l{input.dim(0), input.dim(1), input.rank() == 3 ? input.dim(2) : 1};
  if (l.channels != layer.channels()) {
    throw ShapeError("batchnorm: input has " + std::to_string(l.channels) + " channels, layer has " +
                     std::to_string(layer.channels()));
  }
  return l;
}

}  // namespace

template <typename T>
BatchNormLayer<T>::BatchNormLayer(std::size_t channels)
    : gamma({channels}, T{1}), beta({channels}), running_mean({channels}), running_var({channels}, T{1}) {}

template <typename T>
BasicTensor<T> batchnorm_forward(const BatchNormLayer<T>& layer, const BasicTensor<T>& input, Mode mode,
                                 BatchNormCache<T>* cache) {
  const auto l = layout(layer, input);
  BasicTensor<T> out(input.shape());
  const std::size_t stride = l.channels * l.length;

  if (mode == Mode::Infer) {
    amc::parallel_for(l.channels, [&](std::size_t c) {
      const T scale = layer.gamma[c] / std::sqrt(layer.running_var[c] + layer.eps);
      const T shift = layer.beta[c] - scale * layer.running_mean[c];
      for (std::size_t b = 0; b < l.batch; ++b) {
        const std::size_t base = b * stride + c * l.length;
        for (std::size_t t = 0; t < l.length; ++t) out[base + t] = scale * input[base + t] + shift;
      }
    });
    return out;
  }

  if (l.batch < 2) throw ValueError("batchnorm: train mode needs a batch of at least 2");
  if (cache == nullptr) throw ValueError("batchnorm: train mode needs a cache");
  cache->normalized = BasicTensor<T>(input.shape());
  cache->mean.assign(l.channels, T{0});
  cache->var.assign(l.channels, T{0});
  cache->inv_std.assign(l.channels, T{0});
  cache->count = l.batch * l.length;

  amc::parallel_for(l.channels, [&](std::size_t c) {
    double sum = 0.0;
    for (std::size_t b = 0; b < l.batch; ++b) {
      const std::size_t base = b * stride + c * l.length;
      for (std::size_t t = 0; t < l.length; ++t) sum += input[base + t];
    }
    const double mean = sum / static_cast<double>(cache->count);
    double sq = 0.0;
    for (std::size_t b = 0; b < l.batch; ++b) {
      const std::size_t base = b * stride + c * l.length;
      for (std::size_t t = 0; t < l.length; ++t) {
        const double d = input[base + t] - mean;
        sq += d * d;
      }
    }
    const double var = sq / static_cast<double>(cache->count);
    const T inv_std = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(layer.eps)));
    cache->mean[c] = static_cast<T>(mean);
    cache->var[c] = static_cast<T>(var);
    cache->inv_std[c] = inv_std;
    const T m = static_cast<T>(mean);
    for (std::size_t b = 0; b < l.batch; ++b) {
      const std::size_t base = b * stride + c * l.length;
      for (std::size_t t = 0; t < l.length; ++t) {
        const T xhat = (input[base + t] - m) * inv_std;
        cache->normalized[base + t] = xhat;
        out[base + t] = layer.gamma[c] * xhat + layer.beta[c];
      }
    }
  });
  return out;
}

template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormLayer<T>& layer, const BatchNormCache<T>& cache,
                                     const BasicTensor<T>& grad_out) {
  expect_shape(grad_out, cache.normalized.shape(), "batchnorm_backward grad_out");
  const auto l = layout(layer, grad_out);
  const std::size_t stride = l.channels * l.length;
  BatchNormGrads<T> grads{BasicTensor<T>(grad_out.shape()), BasicTensor<T>({l.channels}),
                          BasicTensor<T>({l.channels})};
  const auto& xhat = cache.normalized;

  amc::parallel_for(l.channels, [&](std::size_t c) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (std::size_t b = 0; b < l.batch; ++b) {
      const std::size_t base = b * stride + c * l.length;
      for (std::size_t t = 0; t < l.length; ++t) {
        sum_dy += grad_out[base + t];
        sum_dy_xhat += static_cast<double>(grad_out[base + t]) * xhat[base + t];
      }
    }
    grads.beta[c] = static_cast<T>(sum_dy);
    grads.gamma[c] = static_cast<T>(sum_dy_xhat);
    const double n = static_cast<double>(cache.count);
    const double scale = static_cast<double>(layer.gamma[c]) * cache.inv_std[c] / n;
    for (std::size_t b = 0; b < l.batch; ++b) {
      const std::size_t base = b * stride + c * l.length;
      for (std::size_t t = 0; t < l.length; ++t) {
        grads.input[base + t] =
            static_cast<T>(scale * (n * grad_out[base + t] - sum_dy - xhat[base + t] * sum_dy_xhat));
      }
    }
  });
  return grads;
}

template <typename T>
void update_running_stats(BatchNormLayer<T>& layer, const BatchNormCache<T>& cache) {
  if (cache.mean.size() != layer.channels() || cache.count < 2) {
    throw ShapeError("batchnorm: cache does not match layer");
  }
  const T m = layer.momentum;
  const T unbias = static_cast<T>(cache.count) / static_cast<T>(cache.count - 1);
  for (std::size_t c = 0; c < layer.channels(); ++c) {
    layer.running_mean[c] = (T{1} - m) * layer.running_mean[c] + m * cache.mean[c];
    layer.running_var[c] = (T{1} - m) * layer.running_var[c] + m * cache.var[c] * unbias;
  }
}

template struct BatchNormLayer<float>;
template struct BatchNormLayer<double>;
template Tensor batchnorm_forward(const BatchNormLayer<float>&, const Tensor&, Mode, BatchNormCache<float>*);
template TensorD batchnorm_forward(const BatchNormLayer<double>&, const TensorD&, Mode, BatchNormCache<double>*);
template BatchNormGrads<float> batchnorm_backward(const BatchNormLayer<float>&, const BatchNormCache<float>&,
                                                  const Tensor&);
template BatchNormGrads<double> batchnorm_backward(const BatchNormLayer<double>&, const BatchNormCache<double>&,
                                                   const TensorD&);
template void update_running_stats(BatchNormLayer<float>&, const BatchNormCache<float>&);
template void update_running_stats(BatchNormLayer<double>&, const BatchNormCache<double>&);

}  // namespace amc::nn
