#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "amc/loss/center_loss.hpp"
#include "amc/loss/softmax.hpp"
#include "amc/nn/msnet.hpp"
#include "amc/signalgen/dataset.hpp"
#include "amc/train/sgd.hpp"

namespace amc::train {

enum class Stage { S1, S2 };

const char* stage_name(Stage stage) noexcept;

// Reference center learning rate: center_lr equal to this leaves alpha as is.
inline constexpr double kReferenceCenterLr = 1e-4;

struct TrainConfig {
  double lr = 0.01;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  std::size_t epochs_stage1 = 40;
  std::size_t epochs_stage2 = 5;
  std::size_t batch_size = 128;
  // Scales alpha: the center step uses alpha * center_lr / 1e-4.
  double center_lr = 1e-4;
  double lambda = 0.01;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  loss::Reduction reduction = loss::Reduction::Mean;
  // Multiply lr by lr_step_factor every lr_step_epochs epochs of a stage; 0 keeps it constant.
  std::size_t lr_step_epochs = 0;
  double lr_step_factor = 0.1;
  // Stop a stage once test accuracy has not improved for this many epochs; 0 disables.
  std::size_t early_stop_patience = 0;
  // When false the report's seconds column is written as 0 so reruns are byte-identical.
  bool record_wall_time = false;
  nn::MSNetConfig net;

  // Throws ConfigError naming the offending field.
  void validate() const;
  double effective_alpha() const { return alpha * center_lr / kReferenceCenterLr; }
  double lr_at(std::size_t stage_epoch) const;
};

struct EpochRecord {
  Stage stage = Stage::S1;
  std::size_t epoch = 0;  // 1-based, continuous across stages
  double loss_total = 0;
  double loss_softmax = 0;
  double loss_center = 0;  // lambda-weighted center term
  double train_acc = 0;
  double test_acc = 0;
  double seconds = 0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(Stage stage, std::size_t epoch, std::size_t batch);

  Stage stage() const noexcept { return stage_; }
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  Stage stage_;
  std::size_t epoch_;
  std::size_t batch_;
};

// Shuffling stream of one stage; S1 and S2 draw from distinct streams.
std::mt19937_64 shuffle_rng(std::uint64_t seed, Stage stage);

using EpochCallback = std::function<void(const EpochRecord&)>;

// Runs one stage of the two-stage procedure over `train`, updating `params`
// and (in S1) `centers` in place.
//
// Per mini-batch in S1: forward, joint loss, feature gradient
// dL_S/dx + lambda dL_C/dx, center update, then an SGD step on all network
// parameters. S2 is identical with lambda forced to 0 and centers frozen.
// A trailing batch of one sample is merged into the previous batch because
// batch norm needs two. Epochs are numbered from first_epoch. Throws
// TrainingDiverged on a non-finite loss or gradient.
TrainReport train_stage(nn::MSNetParams<float>& params, loss::Centers<float>& centers,
                        const signalgen::Dataset& train, const signalgen::Dataset& test, const TrainConfig& config,
                        Stage stage, std::size_t first_epoch = 1, const EpochCallback& on_epoch = {});

struct TrainResult {
  nn::MSNetParams<float> params;
  loss::Centers<float> centers;
  TrainReport report;
};

using StageCallback = std::function<void(Stage, const nn::MSNetParams<float>&, const loss::Centers<float>&)>;

// S1 from a Kaiming-uniform init seeded by config.seed and zero centers,
// then S2 from the S1 model with a fresh optimizer state. on_stage_end runs
// after S1, and after S2 when epochs_stage2 > 0.
TrainResult train_two_stage(const signalgen::Dataset& train, const signalgen::Dataset& test,
                            const TrainConfig& config, const StageCallback& on_stage_end = {},
                            const EpochCallback& on_epoch = {});

}  // namespace amc::train
