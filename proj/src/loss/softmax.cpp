#include "amc/loss/softmax.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amc/common/error.hpp"

namespace amc::loss {

void check_labels(std::span<const int> labels, std::size_t rows, std::size_t classes, const char* what) {
  if (labels.size() != rows) {
    throw ValueError(std::string(what) + ": " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(rows) + " rows");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
      throw ValueError(std::string(what) + ": label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                       " is outside [0, " + std::to_string(classes) + ")");
    }
  }
}

template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits) {
  nn::expect_rank(logits, 2, "softmax");
  const std::size_t m = logits.dim(0), k = logits.dim(1);
  BasicTensor<T> out(logits.shape());
  for (std::size_t i = 0; i < m; ++i) {
    const T* z = logits.raw() + i * k;
    T* p = out.raw() + i * k;
    const T zmax = *std::max_element(z, z + k);
    T sum{0};
    for (std::size_t j = 0; j < k; ++j) {
      p[j] = std::exp(z[j] - zmax);
      sum += p[j];
    }
    for (std::size_t j = 0; j < k; ++j) p[j] /= sum;
  }
  return out;
}

template <typename T>
T cross_entropy(const BasicTensor<T>& probs, std::span<const int> labels, Reduction reduction) {
  nn::expect_rank(probs, 2, "cross_entropy");
  const std::size_t m = probs.dim(0);
  check_labels(labels, m, probs.dim(1), "cross_entropy");
  double loss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = probs.at(i, static_cast<std::size_t>(labels[i]));
    loss -= std::log(std::max(p, 1e-12));
  }
  if (reduction == Reduction::Mean && m > 0) loss /= static_cast<double>(m);
  return static_cast<T>(loss);
}

template <typename T>
BasicTensor<T> softmax_ce_backward(const BasicTensor<T>& logits, std::span<const int> labels, Reduction reduction) {
  nn::expect_rank(logits, 2, "softmax_ce_backward");
  const std::size_t m = logits.dim(0);
  check_labels(labels, m, logits.dim(1), "softmax_ce_backward");
  auto grad = softmax(logits);
  const T scale = reduction == Reduction::Mean ? T{1} / static_cast<T>(m) : T{1};
  for (std::size_t i = 0; i < m; ++i) grad.at(i, static_cast<std::size_t>(labels[i])) -= T{1};
  for (auto& g : grad.data()) g *= scale;
  return grad;
}

template BasicTensor<float> softmax(const BasicTensor<float>&);
template BasicTensor<double> softmax(const BasicTensor<double>&);
template float cross_entropy(const BasicTensor<float>&, std::span<const int>, Reduction);
template double cross_entropy(const BasicTensor<double>&, std::span<const int>, Reduction);
template BasicTensor<float> softmax_ce_backward(const BasicTensor<float>&, std::span<const int>, Reduction);
template BasicTensor<double> softmax_ce_backward(const BasicTensor<double>&, std::span<const int>, Reduction);

}  // namespace amc::loss
