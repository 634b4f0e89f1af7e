#include "amc/nn/dense.hpp"

#include <string>

#include "amc/common/error.hpp"
#include "eigen_maps.hpp"

namespace amc::nn {
namespace {

using detail::ConstMatMap;
using detail::MatMap;

template <typename T>
void check_input(const DenseLayer<T>& layer, const BasicTensor<T>& input) {
  expect_rank(input, 2, "dense");
  if (input.dim(1) != layer.in_dim()) {
    throw ShapeError("dense: input width " + std::to_string(input.dim(1)) + " does not match layer in_dim " +
                     std::to_string(layer.in_dim()));
  }
}

}  // namespace

template <typename T>
BasicTensor<T> dense_forward(const DenseLayer<T>& layer, const BasicTensor<T>& input) {
  check_input(layer, input);
  const std::size_t batch = input.dim(0);
  BasicTensor<T> out({batch, layer.out_dim()});
  MatMap<T> y(out.raw(), batch, layer.out_dim());
  y.noalias() = ConstMatMap<T>(input.raw(), batch, layer.in_dim()) *
                ConstMatMap<T>(layer.weight.raw(), layer.in_dim(), layer.out_dim());
  y.rowwise() += ConstMatMap<T>(layer.bias.raw(), 1, layer.out_dim()).row(0);
  return out;
}

template <typename T>
DenseGrads<T> dense_backward(const DenseLayer<T>& layer, const BasicTensor<T>& input, const BasicTensor<T>& grad_out) {
  check_input(layer, input);
  const std::size_t batch = input.dim(0);
  expect_shape(grad_out, {batch, layer.out_dim()}, "dense_backward grad_out");
  DenseGrads<T> grads{BasicTensor<T>(input.shape()), BasicTensor<T>(layer.weight.shape()),
                      BasicTensor<T>(layer.bias.shape())};
  const ConstMatMap<T> x(input.raw(), batch, layer.in_dim());
  const ConstMatMap<T> dy(grad_out.raw(), batch, layer.out_dim());
  MatMap<T>(grads.input.raw(), batch, layer.in_dim()).noalias() =
      dy * ConstMatMap<T>(layer.weight.raw(), layer.in_dim(), layer.out_dim()).transpose();
  MatMap<T>(grads.weight.raw(), layer.in_dim(), layer.out_dim()).noalias() = x.transpose() * dy;
  // row by row in batch order; Eigen's colwise sum is address dependent
  T* gb = grads.bias.raw();
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t o = 0; o < layer.out_dim(); ++o) gb[o] += grad_out.raw()[b * layer.out_dim() + o];
  return grads;
}

template Tensor dense_forward(const DenseLayer<float>&, const Tensor&);
template TensorD dense_forward(const DenseLayer<double>&, const TensorD&);
template DenseGrads<float> dense_backward(const DenseLayer<float>&, const Tensor&, const Tensor&);
template DenseGrads<double> dense_backward(const DenseLayer<double>&, const TensorD&, const TensorD&);

}  // namespace amc::nn
