#pragma once

#include <iosfwd>

#include "amc/cli/run_config.hpp"
#include "amc/train/split.hpp"

namespace amc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitDiverged = 3;

// Reads the dataset file and splits it with the configured fraction and seed.
train::DatasetSplit load_split(const RunConfig& config);

// Each command throws on failure; exit_code_for maps the exception.
void cmd_generate(const RunConfig& config, std::ostream& out);
void cmd_train(const RunConfig& config, std::ostream& out);
void cmd_eval(const RunConfig& config, std::ostream& out);
void cmd_features(const RunConfig& config, std::ostream& out);
void cmd_pca(const RunConfig& config, std::ostream& out);

// Maps the exception currently being handled to an exit code.
int exit_code_for(std::exception_ptr error);

}  // namespace amc::cli
