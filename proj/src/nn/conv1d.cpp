#include "amc/nn/conv1d.hpp"

#include <string>

#include "amc/common/error.hpp"
#include "amc/common/parallel.hpp"
#include "eigen_maps.hpp"

namespace amc::nn {
namespace {

using detail::ConstMatMap;
using detail::kReduceChunk;
using detail::MatMap;
using detail::RowMatrix;

struct Geometry {
  std::size_t batch, in_ch, out_ch, kernel, length, out_length, stride, padding;

  bool pointwise() const { return kernel == 1 && stride == 1 && padding == 0; }
};

template <typename T>
Geometry geometry(const Conv1dLayer<T>& layer, const BasicTensor<T>& input) {
  expect_rank(input, 3, "conv1d");
  if (input.dim(1) != layer.in_channels()) {
    throw ShapeError("conv1d: input has " + std::to_string(input.dim(1)) + " channels, layer expects " +
                     std::to_string(layer.in_channels()));
  }
  return {input.dim(0),         layer.in_channels(),
          layer.out_channels(), layer.kernel_size(),
          input.dim(2),         layer.output_length(input.dim(2)),
          layer.stride,         layer.padding};
}

// col[c*k + j, t] = x[c, t*stride + j - padding], zero outside the signal.
template <typename T>
void im2col(const Geometry& g, const T* x, RowMatrix<T>& col) {
  col.resize(static_cast<Eigen::Index>(g.in_ch * g.kernel), static_cast<Eigen::Index>(g.out_length));
  for (std::size_t c = 0; c < g.in_ch; ++c) {
    const T* row_in = x + c * g.length;
    for (std::size_t j = 0; j < g.kernel; ++j) {
      T* row = col.data() + (c * g.kernel + j) * g.out_length;
      for (std::size_t t = 0; t < g.out_length; ++t) {
        const auto src = static_cast<std::ptrdiff_t>(t * g.stride + j) - static_cast<std::ptrdiff_t>(g.padding);
        row[t] = (src >= 0 && src < static_cast<std::ptrdiff_t>(g.length)) ? row_in[src] : T{0};
      }
    }
  }
}

template <typename T>
void col2im_add(const Geometry& g, const RowMatrix<T>& col, T* dx) {
  for (std::size_t c = 0; c < g.in_ch; ++c) {
    T* row_out = dx + c * g.length;
    for (std::size_t j = 0; j < g.kernel; ++j) {
      const T* row = col.data() + (c * g.kernel + j) * g.out_length;
      for (std::size_t t = 0; t < g.out_length; ++t) {
        const auto src = static_cast<std::ptrdiff_t>(t * g.stride + j) - static_cast<std::ptrdiff_t>(g.padding);
        if (src >= 0 && src < static_cast<std::ptrdiff_t>(g.length)) row_out[src] += row[t];
      }
    }
  }
}

}  // namespace

template <typename T>
Conv1dLayer<T>::Conv1dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
                            std::size_t stride_, std::size_t padding_)
    : weight({out_channels, in_channels, kernel}), bias({out_channels}), stride(stride_), padding(padding_) {
  if (in_channels == 0 || out_channels == 0 || kernel == 0 || stride_ == 0) {
    throw ShapeError("conv1d: channels, kernel and stride must be >= 1");
  }
}

template <typename T>
std::size_t Conv1dLayer<T>::output_length(std::size_t length) const {
  const std::size_t padded = length + 2 * padding;
  if (padded < kernel_size()) {
    throw ShapeError("conv1d: input length " + std::to_string(length) + " with padding " + std::to_string(padding) +
                     " is shorter than kernel " + std::to_string(kernel_size()));
  }
  return (padded - kernel_size()) / stride + 1;
}

template <typename T>
BasicTensor<T> conv1d_forward(const Conv1dLayer<T>& layer, const BasicTensor<T>& input) {
  const auto g = geometry(layer, input);
  BasicTensor<T> out({g.batch, g.out_ch, g.out_length});
  const ConstMatMap<T> w(layer.weight.raw(), g.out_ch, g.in_ch * g.kernel);
  const Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bias(layer.bias.raw(), g.out_ch);

  amc::parallel_for(g.batch, [&](std::size_t b) {
    const T* x = input.raw() + b * g.in_ch * g.length;
    MatMap<T> y(out.raw() + b * g.out_ch * g.out_length, g.out_ch, g.out_length);
    if (g.pointwise()) {
      y.noalias() = w * ConstMatMap<T>(x, g.in_ch, g.length);
    } else {
      RowMatrix<T> col;
      im2col(g, x, col);
      y.noalias() = w * col;
    }
    y.colwise() += bias;
  });
  return out;
}

template <typename T>
Conv1dGrads<T> conv1d_backward(const Conv1dLayer<T>& layer, const BasicTensor<T>& input,
                               const BasicTensor<T>& grad_out) {
  const auto g = geometry(layer, input);
  expect_shape(grad_out, {g.batch, g.out_ch, g.out_length}, "conv1d_backward grad_out");

  Conv1dGrads<T> grads{BasicTensor<T>(input.shape()), BasicTensor<T>(layer.weight.shape()),
                       BasicTensor<T>(layer.bias.shape())};
  const ConstMatMap<T> w(layer.weight.raw(), g.out_ch, g.in_ch * g.kernel);

  const std::size_t chunks = (g.batch + kReduceChunk - 1) / kReduceChunk;
  std::vector<RowMatrix<T>> partial_w(chunks);
  std::vector<Eigen::Matrix<T, Eigen::Dynamic, 1>> partial_b(chunks);

  amc::parallel_for(chunks, [&](std::size_t chunk) {
    auto& pw = partial_w[chunk];
    auto& pb = partial_b[chunk];
    pw.setZero(static_cast<Eigen::Index>(g.out_ch), static_cast<Eigen::Index>(g.in_ch * g.kernel));
    pb.setZero(static_cast<Eigen::Index>(g.out_ch));
    RowMatrix<T> col;
    RowMatrix<T> dcol;
    const std::size_t end = std::min(g.batch, (chunk + 1) * kReduceChunk);
    for (std::size_t b = chunk * kReduceChunk; b < end; ++b) {
      const T* x = input.raw() + b * g.in_ch * g.length;
      T* dx = grads.input.raw() + b * g.in_ch * g.length;
      const ConstMatMap<T> dy(grad_out.raw() + b * g.out_ch * g.out_length, g.out_ch, g.out_length);
      // plain loop: Eigen's horizontal sum peels by address, which breaks
      // run-to-run reproducibility
      for (std::size_t o = 0; o < g.out_ch; ++o) {
        const T* row = dy.data() + o * g.out_length;
        T acc = 0;
        for (std::size_t t = 0; t < g.out_length; ++t) acc += row[t];
        pb[static_cast<Eigen::Index>(o)] += acc;
      }
      if (g.pointwise()) {
        const ConstMatMap<T> xm(x, g.in_ch, g.length);
        pw.noalias() += dy * xm.transpose();
        MatMap<T>(dx, g.in_ch, g.length).noalias() = w.transpose() * dy;
      } else {
        im2col(g, x, col);
        pw.noalias() += dy * col.transpose();
        dcol.noalias() = w.transpose() * dy;
        col2im_add(g, dcol, dx);
      }
    }
  });

  MatMap<T> gw(grads.weight.raw(), g.out_ch, g.in_ch * g.kernel);
  Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> gb(grads.bias.raw(), g.out_ch);
  for (std::size_t chunk = 0; chunk < chunks; ++chunk) {
    gw += partial_w[chunk];
    gb += partial_b[chunk];
  }
  return grads;
}

template struct Conv1dLayer<float>;
template struct Conv1dLayer<double>;
template Tensor conv1d_forward(const Conv1dLayer<float>&, const Tensor&);
template TensorD conv1d_forward(const Conv1dLayer<double>&, const TensorD&);
template Conv1dGrads<float> conv1d_backward(const Conv1dLayer<float>&, const Tensor&, const Tensor&);
template Conv1dGrads<double> conv1d_backward(const Conv1dLayer<double>&, const TensorD&, const TensorD&);

}  // namespace amc::nn
