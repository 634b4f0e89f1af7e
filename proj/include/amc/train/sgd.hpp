#pragma once

#include <span>
#include <vector>

#include "amc/nn/msnet.hpp"

namespace amc::train {

struct SgdOptions {
  double lr = 0.01;
  double momentum = 0.9;
  double weight_decay = 5e-4;
};

// g' = g + weight_decay * p;  v <- momentum * v + g';  p <- p - lr * v.
// Throws ShapeError when the spans differ in length.
void sgd_update(std::span<float> param, std::span<const float> grad, std::span<float> velocity,
                const SgdOptions& options);

// One velocity tensor per trainable tensor, in visit_tensors order.
struct OptimizerState {
  std::vector<nn::Tensor> velocity;
};

OptimizerState make_optimizer_state(const nn::MSNetParams<float>& params);

// Applies sgd_update to every trainable tensor. Batch-norm gamma/beta get no
// weight decay; running statistics are untouched.
void sgd_step(nn::MSNetParams<float>& params, const nn::MSNetParams<float>& grads, OptimizerState& state,
              const SgdOptions& options);

}  // namespace amc::train
