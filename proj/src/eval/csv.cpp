#include "amc/eval/csv.hpp"

#include <fstream>

#include "amc/common/error.hpp"
#include "amc/common/text.hpp"

namespace amc::eval {

std::string metrics_csv(const Metrics& metrics) {
  std::string out = "snr_db,accuracy\n";
  for (const auto& [snr, acc] : metrics.per_snr_accuracy) out += std::to_string(snr) + "," + to_text(acc) + "\n";
  out += "overall," + to_text(metrics.overall_accuracy) + "\n";
  return out;
}

std::string confusion_csv(const Metrics& metrics, const std::vector<std::string>& class_names) {
  const std::size_t k = metrics.num_classes();
  auto name = [&](std::size_t i) { return i < class_names.size() ? class_names[i] : std::to_string(i); };
  std::string out = "true\\pred";
  for (std::size_t j = 0; j < k; ++j) out += "," + name(j);
  out += "\n";
  for (std::size_t i = 0; i < k; ++i) {
    out += name(i);
    for (std::size_t j = 0; j < k; ++j) out += "," + std::to_string(metrics.confusion[i][j]);
    out += "\n";
  }
  return out;
}

std::string features_csv(const FeatureDump& dump) {
  const std::size_t d = dump.features.rank() == 2 ? dump.features.dim(1) : 0;
  std::string out = "class,snr";
  for (std::size_t k = 0; k < d; ++k) out += ",f" + std::to_string(k);
  out += "\n";
  for (std::size_t i = 0; i < dump.size(); ++i) {
    out += std::to_string(dump.class_id[i]) + "," + std::to_string(dump.snr_db[i]);
    for (std::size_t k = 0; k < d; ++k) out += "," + to_text(dump.features.at(i, k));
    out += "\n";
  }
  return out;
}

std::string pca_csv(const FeatureDump& dump, const nn::TensorD& projection) {
  nn::expect_shape(projection, {dump.size(), 2}, "pca_csv");
  std::string out = "class,snr,pc1,pc2\n";
  for (std::size_t i = 0; i < dump.size(); ++i) {
    out += std::to_string(dump.class_id[i]) + "," + std::to_string(dump.snr_db[i]) + "," +
           to_text(projection.at(i, 0)) + "," + to_text(projection.at(i, 1)) + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace amc::eval
