#include "amc/loss/center_loss.hpp"

#include <string>
#include <vector>

#include "amc/common/error.hpp"

namespace amc::loss {
namespace {

template <typename T>
void check_inputs(const BasicTensor<T>& features, std::span<const int> labels, const Centers<T>& centers,
                  const char* what) {
  nn::expect_rank(features, 2, what);
  if (features.dim(1) != centers.dim()) {
    throw ShapeError(std::string(what) + ": feature dim " + std::to_string(features.dim(1)) + " vs center dim " +
                     std::to_string(centers.dim()));
  }
  check_labels(labels, features.dim(0), centers.num_classes(), what);
}

}  // namespace

template <typename T>
Centers<T>::Centers(std::size_t num_classes, std::size_t dim, T alpha_) : c({num_classes, dim}), alpha(alpha_) {
  if (!(alpha_ >= T{0} && alpha_ <= T{1})) throw ValueError("centers: alpha must lie in [0, 1]");
}

template <typename T>
T center_loss(const BasicTensor<T>& features, std::span<const int> labels, const Centers<T>& centers,
              Reduction reduction) {
  check_inputs(features, labels, centers, "center_loss");
  const std::size_t m = features.dim(0), d = features.dim(1);
  double loss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = static_cast<double>(features.at(i, k)) - centers.c.at(y, k);
      loss += diff * diff;
    }
  }
  loss *= 0.5;
  if (reduction == Reduction::Mean && m > 0) loss /= static_cast<double>(m);
  return static_cast<T>(loss);
}

template <typename T>
BasicTensor<T> center_loss_grad(const BasicTensor<T>& features, std::span<const int> labels,
                                const Centers<T>& centers, Reduction reduction) {
  check_inputs(features, labels, centers, "center_loss_grad");
  const std::size_t m = features.dim(0), d = features.dim(1);
  const T scale = reduction == Reduction::Mean ? T{1} / static_cast<T>(m) : T{1};
  BasicTensor<T> grad(features.shape());
  for (std::size_t i = 0; i < m; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    for (std::size_t k = 0; k < d; ++k) grad.at(i, k) = (features.at(i, k) - centers.c.at(y, k)) * scale;
  }
  return grad;
}

template <typename T>
Centers<T> center_update(const BasicTensor<T>& features, std::span<const int> labels, Centers<T> centers) {
  check_inputs(features, labels, centers, "center_update");
  const std::size_t m = features.dim(0), d = features.dim(1), k = centers.num_classes();
  std::vector<double> diff_sum(k * d, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    ++count[y];
    for (std::size_t j = 0; j < d; ++j) {
      diff_sum[y * d + j] += static_cast<double>(centers.c.at(y, j)) - static_cast<double>(features.at(i, j));
    }
  }
  for (std::size_t y = 0; y < k; ++y) {
    if (count[y] == 0) continue;
    const double denom = 1.0 + static_cast<double>(count[y]);
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = diff_sum[y * d + j] / denom;
      centers.c.at(y, j) = static_cast<T>(static_cast<double>(centers.c.at(y, j)) - centers.alpha * delta);
    }
  }
  return centers;
}

template struct Centers<float>;
template struct Centers<double>;
template float center_loss(const BasicTensor<float>&, std::span<const int>, const Centers<float>&, Reduction);
template double center_loss(const BasicTensor<double>&, std::span<const int>, const Centers<double>&, Reduction);
template BasicTensor<float> center_loss_grad(const BasicTensor<float>&, std::span<const int>, const Centers<float>&,
                                             Reduction);
template BasicTensor<double> center_loss_grad(const BasicTensor<double>&, std::span<const int>,
                                              const Centers<double>&, Reduction);
template Centers<float> center_update(const BasicTensor<float>&, std::span<const int>, Centers<float>);
template Centers<double> center_update(const BasicTensor<double>&, std::span<const int>, Centers<double>);

}  // namespace amc::loss
