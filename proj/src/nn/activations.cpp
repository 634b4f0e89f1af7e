#include "amc/nn/activations.hpp"

#include "amc/common/error.hpp"

namespace amc::nn {

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& z) {
  BasicTensor<T> out(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > T{0} ? z[i] : T{0};
  return out;
}

template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& z, const BasicTensor<T>& grad_out) {
  expect_shape(grad_out, z.shape(), "relu_backward");
  BasicTensor<T> out(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > T{0} ? grad_out[i] : T{0};
  return out;
}

template <typename T>
BasicTensor<T> gap(const BasicTensor<T>& input) {
  expect_rank(input, 3, "gap");
  const std::size_t batch = input.dim(0), channels = input.dim(1), length = input.dim(2);
  if (length == 0) throw ShapeError("gap: empty temporal axis");
  BasicTensor<T> out({batch, channels});
  for (std::size_t r = 0; r < batch * channels; ++r) {
    T acc{0};
    for (std::size_t t = 0; t < length; ++t) acc += input[r * length + t];
    out[r] = acc / static_cast<T>(length);
  }
  return out;
}

template <typename T>
BasicTensor<T> gap_backward(const BasicTensor<T>& grad_out, std::size_t length) {
  expect_rank(grad_out, 2, "gap_backward");
  if (length == 0) throw ShapeError("gap_backward: empty temporal axis");
  BasicTensor<T> out({grad_out.dim(0), grad_out.dim(1), length});
  for (std::size_t r = 0; r < grad_out.size(); ++r) {
    const T g = grad_out[r] / static_cast<T>(length);
    for (std::size_t t = 0; t < length; ++t) out[r * length + t] = g;
  }
  return out;
}

template Tensor relu(const Tensor&);
template TensorD relu(const TensorD&);
template Tensor relu_backward(const Tensor&, const Tensor&);
template TensorD relu_backward(const TensorD&, const TensorD&);
template Tensor gap(const Tensor&);
template TensorD gap(const TensorD&);
template Tensor gap_backward(const Tensor&, std::size_t);
template TensorD gap_backward(const TensorD&, std::size_t);

}  // namespace amc::nn
