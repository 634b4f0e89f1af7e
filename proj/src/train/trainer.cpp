#include "amc/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "amc/common/error.hpp"
#include "amc/eval/metrics.hpp"
#include "amc/loss/joint_loss.hpp"
#include "amc/train/batching.hpp"

namespace amc::train {
namespace {

bool finite_grads(const nn::MSNetParams<float>& grads) {
  bool ok = true;
  nn::visit_tensors(grads, [&](const std::string&, const nn::Tensor& t, nn::ParamKind) {
    if (ok && !t.all_finite()) ok = false;
  });
  return ok;
}

}  // namespace

const char* stage_name(Stage stage) noexcept { return stage == Stage::S1 ? "S1" : "S2"; }

std::mt19937_64 shuffle_rng(std::uint64_t seed, Stage stage) {
  return std::mt19937_64(seed * 0x9E3779B97F4A7C15ull + (stage == Stage::S1 ? 0x51u : 0x52u));
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (batch_size < 2) throw ConfigError("batch_size must be >= 2 (batch norm needs two samples)");
  if (!(center_lr >= 0.0)) throw ConfigError("center_lr must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  const double a = effective_alpha();
  if (!(a >= 0.0 && a <= 1.0)) {
    throw ConfigError("alpha * center_lr / 1e-4 = " + std::to_string(a) + " must lie in [0, 1]");
  }
  if (!(lr_step_factor > 0.0)) throw ConfigError("lr_step_factor must be > 0");
}

double TrainConfig::lr_at(std::size_t stage_epoch) const {
  if (lr_step_epochs == 0 || stage_epoch == 0) return lr;
  return lr * std::pow(lr_step_factor, static_cast<double>((stage_epoch - 1) / lr_step_epochs));
}

TrainingDiverged::TrainingDiverged(Stage stage, std::size_t epoch, std::size_t batch)
    : std::runtime_error(std::string("training diverged in stage ") + stage_name(stage) + " at epoch " +
                         std::to_string(epoch) + ", batch " + std::to_string(batch)),
      stage_(stage),
      epoch_(epoch),
      batch_(batch) {}

TrainReport train_stage(nn::MSNetParams<float>& params, loss::Centers<float>& centers,
                        const signalgen::Dataset& train, const signalgen::Dataset& test, const TrainConfig& config,
                        Stage stage, std::size_t first_epoch, const EpochCallback& on_epoch) {
  config.validate();
  const std::size_t epochs = stage == Stage::S1 ? config.epochs_stage1 : config.epochs_stage2;
  TrainReport report;
  if (epochs == 0) return report;
  if (train.size() < 2) throw ValueError("train_stage: need at least two training frames");

  const loss::LossConfig loss_config{stage == Stage::S1 ? config.lambda : 0.0, config.reduction};
  const bool use_center = loss_config.lambda > 0.0;
  auto rng = shuffle_rng(config.seed, stage);
  auto state = make_optimizer_state(params);
  const std::size_t batch_size = std::min(config.batch_size, train.size());
  double best_test = -1.0;
  std::size_t since_best = 0;

  for (std::size_t e = 1; e <= epochs; ++e) {
    const auto start = std::chrono::steady_clock::now();
    const SgdOptions sgd{config.lr_at(e), config.momentum, config.weight_decay};
    auto batches = epoch_batches(train.size(), batch_size, rng);
    if (batches.size() > 1 && batches.back().size() == 1) {
      batches[batches.size() - 2].push_back(batches.back().front());
      batches.pop_back();
    }

    double sum_softmax = 0.0, sum_center = 0.0;
    std::size_t correct = 0;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      const auto& idx = batches[bi];
      const auto input = eval::stack_frames(train, idx);
      std::vector<int> labels(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = train.frames[idx[i]].class_id;

      auto out = nn::msnet_forward(params, input, nn::Mode::Train);
      const auto loss = loss::joint_loss(out.logits, out.features, labels, centers, loss_config);
      if (!std::isfinite(loss.total)) throw TrainingDiverged(stage, first_epoch + e - 1, bi + 1);

      auto grads = nn::msnet_backward(params, out.cache, loss.grad_logits, use_center ? &loss.grad_features : nullptr);
      if (!finite_grads(grads)) throw TrainingDiverged(stage, first_epoch + e - 1, bi + 1);

      if (stage == Stage::S1) centers = loss::center_update(out.features, labels, std::move(centers));
      sgd_step(params, grads, state, sgd);
      nn::update_running_stats(params, out.cache);

      const double per_sample = config.reduction == loss::Reduction::Mean ? static_cast<double>(idx.size()) : 1.0;
      sum_softmax += loss.softmax * per_sample;
      sum_center += loss_config.lambda * loss.center * per_sample;
      const auto predicted = eval::argmax_rows(out.logits);
      for (std::size_t i = 0; i < idx.size(); ++i) correct += predicted[i] == labels[i];
    }

    EpochRecord rec;
    rec.stage = stage;
    rec.epoch = first_epoch + e - 1;
    const auto n = static_cast<double>(train.size());
    rec.loss_softmax = sum_softmax / n;
    rec.loss_center = sum_center / n;
    rec.loss_total = rec.loss_softmax + rec.loss_center;
    rec.train_acc = static_cast<double>(correct) / n;
    rec.test_acc = test.empty() ? std::numeric_limits<double>::quiet_NaN() : eval::evaluate(params, test).overall_accuracy;
    if (config.record_wall_time) {
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    report.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (config.early_stop_patience > 0 && !test.empty()) {
      if (rec.test_acc > best_test) {
        best_test = rec.test_acc;
        since_best = 0;
      } else if (++since_best >= config.early_stop_patience) {
        break;
      }
    }
  }
  return report;
}

TrainResult train_two_stage(const signalgen::Dataset& train, const signalgen::Dataset& test,
                            const TrainConfig& config, const StageCallback& on_stage_end,
                            const EpochCallback& on_epoch) {
  config.validate();
  TrainResult result{nn::init_msnet<float>(config.net, config.seed),
                     loss::Centers<float>(config.net.num_classes, config.net.feature_dim,
                                          static_cast<float>(config.effective_alpha())),
                     {}};

  result.report = train_stage(result.params, result.centers, train, test, config, Stage::S1, 1, on_epoch);
  if (on_stage_end) on_stage_end(Stage::S1, result.params, result.centers);
  if (config.epochs_stage2 == 0) return result;

  const std::size_t next = result.report.epochs.size() + 1;
  auto s2 = train_stage(result.params, result.centers, train, test, config, Stage::S2, next, on_epoch);
  result.report.epochs.insert(result.report.epochs.end(), s2.epochs.begin(), s2.epochs.end());
  if (on_stage_end) on_stage_end(Stage::S2, result.params, result.centers);
  return result;
}

}  // namespace amc::train
