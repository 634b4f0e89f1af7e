#include "amc/train/report.hpp"

#include "amc/common/text.hpp"

namespace amc::train {

std::string report_csv(const TrainReport& report) {
  std::string out = "stage,epoch,loss_total,loss_softmax,loss_center,train_acc,test_acc,seconds\n";
  for (const auto& r : report.epochs) {
    out += std::string(stage_name(r.stage)) + "," + std::to_string(r.epoch) + "," + to_text(r.loss_total) + "," +
           to_text(r.loss_softmax) + "," + to_text(r.loss_center) + "," + to_text(r.train_acc) + "," +
           to_text(r.test_acc) + "," + to_text(r.seconds) + "\n";
  }
  return out;
}

}  // namespace amc::train
