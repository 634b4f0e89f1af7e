#include "amc/train/sgd.hpp"

#include <string>

#include "amc/common/error.hpp"

namespace amc::train {

void sgd_update(std::span<float> param, std::span<const float> grad, std::span<float> velocity,
                const SgdOptions& options) {
  if (param.size() != grad.size() || param.size() != velocity.size()) {
    throw ShapeError("sgd_update: parameter, gradient and velocity sizes differ");
  }
  const auto lr = static_cast<float>(options.lr);
  const auto momentum = static_cast<float>(options.momentum);
  const auto decay = static_cast<float>(options.weight_decay);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const float g = grad[i] + decay * param[i];
    velocity[i] = momentum * velocity[i] + g;
    param[i] -= lr * velocity[i];
  }
}

OptimizerState make_optimizer_state(const nn::MSNetParams<float>& params) {
  OptimizerState state;
  nn::visit_tensors(params, [&](const std::string&, const nn::Tensor& t, nn::ParamKind kind) {
    if (nn::is_trainable(kind)) state.velocity.emplace_back(t.shape());
  });
  return state;
}

void sgd_step(nn::MSNetParams<float>& params, const nn::MSNetParams<float>& grads, OptimizerState& state,
              const SgdOptions& options) {
  std::vector<const nn::Tensor*> grad_list;
  nn::visit_tensors(grads, [&](const std::string&, const nn::Tensor& t, nn::ParamKind kind) {
    if (nn::is_trainable(kind)) grad_list.push_back(&t);
  });
  if (grad_list.size() != state.velocity.size()) throw ShapeError("sgd_step: optimizer state does not match");

  std::size_t i = 0;
  nn::visit_tensors(params, [&](const std::string& name, nn::Tensor& p, nn::ParamKind kind) {
    if (!nn::is_trainable(kind)) return;
    const auto& g = *grad_list[i];
    auto& v = state.velocity[i];
    ++i;
    if (g.shape() != p.shape() || v.shape() != p.shape()) {
      throw ShapeError("sgd_step: shape mismatch for '" + name + "'");
    }
    SgdOptions opts = options;
    if (!nn::takes_weight_decay(kind)) opts.weight_decay = 0.0;
    sgd_update(p.data(), g.data(), v.data(), opts);
  });
}

}  // namespace amc::train
