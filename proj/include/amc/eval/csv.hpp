#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "amc/eval/features.hpp"
#include "amc/eval/metrics.hpp"
#include "amc/eval/pca.hpp"

namespace amc::eval {

// "snr_db,accuracy" rows in ascending SNR, then "overall,<accuracy>".
std::string metrics_csv(const Metrics& metrics);

// Header "true\pred,<names...>", then one count row per true class.
std::string confusion_csv(const Metrics& metrics, const std::vector<std::string>& class_names);

// "class,snr,f0,...,f{d-1}" with one row per frame.
std::string features_csv(const FeatureDump& dump);

// "class,snr,pc1,pc2".
std::string pca_csv(const FeatureDump& dump, const nn::TensorD& projection);

// Throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace amc::eval
