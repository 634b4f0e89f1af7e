#pragma once

#include <cstddef>
#include <span>

#include "amc/loss/softmax.hpp"
#include "amc/nn/tensor.hpp"

namespace amc::loss {

// K x d class centers plus the damping factor alpha in [0, 1] of the
// mini-batch center update.
template <typename T>
struct Centers {
  BasicTensor<T> c;
  T alpha = T(0.5);

  Centers() = default;
  // Zero centers. Throws ValueError when alpha is outside [0, 1].
  Centers(std::size_t num_classes, std::size_t dim, T alpha);

  std::size_t num_classes() const { return c.dim(0); }
  std::size_t dim() const { return c.dim(1); }
};

// 1/2 sum_i ||x_i - c_{y_i}||^2, divided by m for Mean.
template <typename T>
T center_loss(const BasicTensor<T>& features, std::span<const int> labels, const Centers<T>& centers,
              Reduction reduction);

// Row i is (x_i - c_{y_i}), divided by m for Mean. The balancing weight is
// applied by the caller.
template <typename T>
BasicTensor<T> center_loss_grad(const BasicTensor<T>& features, std::span<const int> labels,
                                const Centers<T>& centers, Reduction reduction);

// delta_j = sum_{i: y_i = j} (c_j - x_i) / (1 + n_j);  c_j <- c_j - alpha * delta_j.
// Classes absent from the batch keep their centers bit for bit.
template <typename T>
Centers<T> center_update(const BasicTensor<T>& features, std::span<const int> labels, Centers<T> centers);

}  // namespace amc::loss
