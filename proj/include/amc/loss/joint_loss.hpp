#pragma once

#include <span>

#include "amc/loss/center_loss.hpp"
#include "amc/loss/softmax.hpp"

namespace amc::loss {

struct LossConfig {
  double lambda = 0.01;  // weight of the center term; must be >= 0
  Reduction reduction = Reduction::Mean;

  void validate() const;
};

template <typename T>
struct JointLoss {
  T total = 0;    // softmax + lambda * center
  T softmax = 0;  // cross-entropy of softmax(logits)
  T center = 0;   // unweighted center loss
  BasicTensor<T> grad_logits;    // from the softmax term only
  BasicTensor<T> grad_features;  // lambda * center_loss_grad
};

// Both gradient streams are returned separately; the caller adds
// grad_features to the gradient the classifier sends back to the features.
template <typename T>
JointLoss<T> joint_loss(const BasicTensor<T>& logits, const BasicTensor<T>& features, std::span<const int> labels,
                        const Centers<T>& centers, const LossConfig& config);

}  // namespace amc::loss
