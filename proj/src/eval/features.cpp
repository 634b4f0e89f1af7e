#include "amc/eval/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "amc/common/error.hpp"

namespace amc::eval {

FeatureDump export_features(const nn::MSNetParams<float>& params, const Dataset& dataset) {
  const std::size_t d = params.config.feature_dim;
  FeatureDump dump;
  dump.features = nn::Tensor({dataset.size(), d});
  std::vector<std::size_t> indices;
  for (std::size_t first = 0; first < dataset.size(); first += kInferenceBatch) {
    const std::size_t count = std::min(kInferenceBatch, dataset.size() - first);
    indices.resize(count);
    for (std::size_t i = 0; i < count; ++i) indices[i] = first + i;
    const auto result = nn::msnet_forward(params, stack_frames(dataset, indices), nn::Mode::Infer);
    std::copy(result.features.data().begin(), result.features.data().end(), dump.features.raw() + first * d);
  }
  for (const auto& f : dataset.frames) {
    dump.class_id.push_back(f.class_id);
    dump.snr_db.push_back(f.snr_db);
  }
  return dump;
}

Dispersion intra_class_dispersion(const FeatureDump& dump, std::span<const int> classes) {
  nn::expect_rank(dump.features, 2, "intra_class_dispersion");
  const std::size_t n = dump.size(), d = dump.features.dim(1);
  if (dump.features.dim(0) != n) throw ShapeError("intra_class_dispersion: label and feature counts differ");
  Dispersion out;
  for (int cls : classes) {
    std::vector<double> centroid(d, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dump.class_id[i] != cls) continue;
      ++count;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += dump.features.at(i, k);
    }
    if (count == 0) throw ValueError("intra_class_dispersion: class " + std::to_string(cls) + " has no samples");
    for (auto& c : centroid) c /= static_cast<double>(count);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dump.class_id[i] != cls) continue;
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = dump.features.at(i, k) - centroid[k];
        sq += diff * diff;
      }
      total += std::sqrt(sq);
    }
    out.per_class[cls] = total / static_cast<double>(count);
  }
  double sum = 0.0;
  for (const auto& [cls, value] : out.per_class) sum += value;
  out.mean = out.per_class.empty() ? 0.0 : sum / static_cast<double>(out.per_class.size());
  return out;
}

Dispersion intra_class_dispersion(const FeatureDump& dump) {
  const std::set<int> present(dump.class_id.begin(), dump.class_id.end());
  const std::vector<int> classes(present.begin(), present.end());
  return intra_class_dispersion(dump, classes);
}

}  // namespace amc::eval
