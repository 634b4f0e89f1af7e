#include "amc/loss/joint_loss.hpp"

#include <cmath>
#include <string>

#include "amc/common/error.hpp"

namespace amc::loss {

void LossConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValueError("loss: lambda must be a finite value >= 0");
}

template <typename T>
JointLoss<T> joint_loss(const BasicTensor<T>& logits, const BasicTensor<T>& features, std::span<const int> labels,
                        const Centers<T>& centers, const LossConfig& config) {
  config.validate();
  nn::expect_rank(logits, 2, "joint_loss logits");
  nn::expect_rank(features, 2, "joint_loss features");
  if (logits.dim(0) != features.dim(0)) {
    throw ShapeError("joint_loss: " + std::to_string(logits.dim(0)) + " logit rows vs " +
                     std::to_string(features.dim(0)) + " feature rows");
  }
  JointLoss<T> out;
  out.softmax = cross_entropy(softmax(logits), labels, config.reduction);
  out.grad_logits = softmax_ce_backward(logits, labels, config.reduction);
  out.center = center_loss(features, labels, centers, config.reduction);
  out.grad_features = center_loss_grad(features, labels, centers, config.reduction);
  const T lambda = static_cast<T>(config.lambda);
  for (auto& g : out.grad_features.data()) g *= lambda;
  out.total = out.softmax + lambda * out.center;
  return out;
}

template JointLoss<float> joint_loss(const BasicTensor<float>&, const BasicTensor<float>&, std::span<const int>,
                                     const Centers<float>&, const LossConfig&);
template JointLoss<double> joint_loss(const BasicTensor<double>&, const BasicTensor<double>&, std::span<const int>,
                                      const Centers<double>&, const LossConfig&);

}  // namespace amc::loss
