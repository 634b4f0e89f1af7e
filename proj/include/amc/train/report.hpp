#pragma once

#include <string>

#include "amc/train/trainer.hpp"

namespace amc::train {

// Header "stage,epoch,loss_total,loss_softmax,loss_center,train_acc,test_acc,seconds".
std::string report_csv(const TrainReport& report);

}  // namespace amc::train
