#pragma once

#include <map>
#include <span>
#include <vector>

#include "amc/eval/metrics.hpp"

namespace amc::eval {

struct FeatureDump {
  std::vector<int> class_id;
  std::vector<int> snr_db;
  nn::Tensor features;  // n x feature_dim

  std::size_t size() const { return class_id.size(); }
};

// Middle-FC features of every frame from an inference-mode forward pass.
FeatureDump export_features(const nn::MSNetParams<float>& params, const Dataset& dataset);

struct Dispersion {
  std::map<int, double> per_class;  // mean distance to the class centroid
  double mean = 0.0;                // unweighted mean over the classes
};

// Mean Euclidean distance of each class's features to their centroid. Throws
// ValueError naming the first requested class that has no samples.
Dispersion intra_class_dispersion(const FeatureDump& dump, std::span<const int> classes);

// Same, over the classes present in the dump.
Dispersion intra_class_dispersion(const FeatureDump& dump);

}  // namespace amc::eval
