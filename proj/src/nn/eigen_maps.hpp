#pragma once

#include <Eigen/Core>

namespace amc::nn::detail {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using MatMap = Eigen::Map<RowMatrix<T>>;

template <typename T>
using ConstMatMap = Eigen::Map<const RowMatrix<T>>;

// Samples per partial sum when reducing parameter gradients over a batch.
// Fixed so the summation order never depends on the thread count.
inline constexpr std::size_t kReduceChunk = 8;

}  // namespace amc::nn::detail
