#pragma once

#include <span>

#include "amc/nn/tensor.hpp"

namespace amc::loss {

using nn::BasicTensor;

// Mean divides batch sums by the batch size m; Sum keeps the literal sums.
enum class Reduction { Mean, Sum };

// Row-wise softmax with max subtraction.
template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits);

// -sum_i log p[i, label_i] (divided by m for Mean), log argument clamped at 1e-12.
// Throws ValueError for a label outside [0, K) or a label count != m.
template <typename T>
T cross_entropy(const BasicTensor<T>& probs, std::span<const int> labels, Reduction reduction);

// Gradient of cross_entropy(softmax(logits)) with respect to the logits:
// (softmax - onehot) / m for Mean.
template <typename T>
BasicTensor<T> softmax_ce_backward(const BasicTensor<T>& logits, std::span<const int> labels, Reduction reduction);

// Throws ValueError unless labels.size() == rows and each label is in [0, classes).
void check_labels(std::span<const int> labels, std::size_t rows, std::size_t classes, const char* what);

}  // namespace amc::loss
