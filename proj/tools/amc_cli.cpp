#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <memory>
#include <optional>
#include <tbb/global_control.h>

#include "amc/cli/commands.hpp"

namespace {

template <typename T>
void add_override(CLI::App& app, const std::string& flag, std::optional<T>& target, const std::string& help) {
  app.add_option_function<T>(flag, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace amc::cli;
  CLI::App app{"Modulation classification toolkit: generate | train | eval | features | pca"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "JSON run configuration");
  add_override(app, "--seed", o.seed, "seed for generation, split, init and shuffling");
  add_override(app, "--lambda", o.lambda, "center loss weight");
  add_override(app, "--alpha", o.alpha, "center update rate in [0, 1]");
  add_override(app, "--lr", o.lr, "SGD learning rate");
  add_override(app, "--epochs-stage1", o.epochs_stage1, "epochs of stage S1");
  add_override(app, "--epochs-stage2", o.epochs_stage2, "epochs of stage S2");
  add_override(app, "--batch-size", o.batch_size, "mini-batch size");
  add_override(app, "--snr-list", o.snr_list, "SNR values in dB");
  add_override(app, "--out-dir", o.out_dir, "output directory");
  add_override(app, "--dataset", o.dataset, "dataset file");
  add_override(app, "--checkpoint", o.checkpoint, "checkpoint file for eval, features and pca");
  app.get_option("--snr-list")->delimiter(',');

  using Command = void (*)(const RunConfig&, std::ostream&);
  Command command = nullptr;
  struct Entry {
    const char* name;
    const char* help;
    Command fn;
  };
  const Entry commands[] = {
      {"generate", "synthesize the dataset file", cmd_generate},
      {"train", "two-stage training; writes checkpoints and train_report.csv", cmd_train},
      {"eval", "per-SNR accuracy and confusion matrix on the test split", cmd_eval},
      {"features", "dump 128-d test features to features.csv", cmd_features},
      {"pca", "2-D PCA of the test features to pca.csv", cmd_pca}};
  for (const auto& e : commands) {
    app.add_subcommand(e.name, e.help)->callback([&command, fn = e.fn] { command = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    apply_overrides(config, o);
    std::unique_ptr<tbb::global_control> threads;
    if (config.threads > 0) {
      threads = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism, config.threads);
    }
    command(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(std::current_exception());
  }
  return kExitOk;
}
