#include "amc/cli/commands.hpp"

#include <map>
#include <ostream>
#include <utility>

#include "amc/common/error.hpp"
#include "amc/common/text.hpp"
#include "amc/eval/csv.hpp"
#include "amc/eval/features.hpp"
#include "amc/eval/metrics.hpp"
#include "amc/eval/pca.hpp"
#include "amc/nn/checkpoint.hpp"
#include "amc/signalgen/dataset_io.hpp"
#include "amc/train/report.hpp"

namespace amc::cli {
namespace {

void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

nn::Checkpoint load_checkpoint(const RunConfig& config) {
  const auto path = config.checkpoint_for_eval();
  if (!std::filesystem::exists(path)) throw IoError("checkpoint not found: " + path.string());
  return nn::read_checkpoint(path);
}

nn::TensorD to_double(const nn::Tensor& t) { return t.cast<double>(); }

}  // namespace

train::DatasetSplit load_split(const RunConfig& config) {
  const auto dataset = signalgen::read_dataset(config.dataset);
  return train::split_stratified(dataset, config.train_fraction, config.train.seed);
}

void cmd_generate(const RunConfig& config, std::ostream& out) {
  config.gen.validate();
  const auto dataset = signalgen::generate_dataset(config.gen);
  if (config.dataset.has_parent_path()) ensure_out_dir(config.dataset.parent_path());
  signalgen::write_dataset(dataset, config.dataset);

  std::map<std::pair<int, int>, std::size_t> counts;
  for (const auto& f : dataset.frames) ++counts[{f.class_id, f.snr_db}];
  out << "class,snr_db,frames\n";
  for (const auto& [key, n] : counts) out << dataset.class_names.at(key.first) << "," << key.second << "," << n << "\n";
  out << "total_frames=" << dataset.size() << "\n";
}

void cmd_train(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto split = load_split(config);
  ensure_out_dir(config.out_dir);

  auto on_stage = [&](train::Stage stage, const nn::MSNetParams<float>& params, const loss::Centers<float>& centers) {
    const auto path = config.out_dir / (stage == train::Stage::S1 ? "ckpt_s1.bin" : "ckpt_s2.bin");
    nn::write_checkpoint(path, params, &centers.c);
    out << "wrote " << path.string() << "\n";
  };
  auto on_epoch = [&](const train::EpochRecord& r) {
    out << train::stage_name(r.stage) << " epoch " << r.epoch << " loss=" << r.loss_total << " train_acc=" << r.train_acc
        << " test_acc=" << r.test_acc << "\n";
  };
  const auto result = train::train_two_stage(split.train, split.test, config.train, on_stage, on_epoch);
  eval::write_text(config.out_dir / "train_report.csv", train::report_csv(result.report));
}

void cmd_eval(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto ckpt = load_checkpoint(config);
  const auto split = load_split(config);
  ensure_out_dir(config.out_dir);
  const auto metrics = eval::evaluate(ckpt.params, split.test);
  eval::write_text(config.out_dir / "metrics.csv", eval::metrics_csv(metrics));
  eval::write_text(config.out_dir / "confusion.csv", eval::confusion_csv(metrics, signalgen::default_class_names()));
  out << "overall_accuracy=" << to_text(metrics.overall_accuracy) << "\n";
}

void cmd_features(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto ckpt = load_checkpoint(config);
  const auto split = load_split(config);
  ensure_out_dir(config.out_dir);
  const auto dump = eval::export_features(ckpt.params, split.test);
  eval::write_text(config.out_dir / "features.csv", eval::features_csv(dump));
  out << "feature_rows=" << dump.size() << "\n";
}

void cmd_pca(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto ckpt = load_checkpoint(config);
  const auto split = load_split(config);
  ensure_out_dir(config.out_dir);
  const auto dump = eval::export_features(ckpt.params, split.test);
  const auto projection = eval::pca_2d(to_double(dump.features));
  eval::write_text(config.out_dir / "pca.csv", eval::pca_csv(dump, projection));
  out << "pca_rows=" << dump.size() << "\n";
}

int exit_code_for(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const train::TrainingDiverged&) {
    return kExitDiverged;
  } catch (const IoError&) {
    return kExitIo;
  } catch (const FormatError&) {
    return kExitIo;
  } catch (...) {
    return kExitUsage;
  }
}

}  // namespace amc::cli
