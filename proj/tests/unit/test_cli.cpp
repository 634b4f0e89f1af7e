#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "amc/cli/commands.hpp"
#include "amc/common/error.hpp"
#include "amc/signalgen/dataset_io.hpp"
#include "fixtures.hpp"

using namespace amc;
using namespace amc::cli;

namespace {

RunConfig tiny_run(const fixture::TempDir& dir) {
  RunConfig c;
  c.gen = fixture::tiny_gen_config();
  c.train.epochs_stage1 = 1;
  c.train.epochs_stage2 = 1;
  c.train.batch_size = 16;
  c.dataset = dir / "data.bin";
  c.out_dir = dir / "out";
  return c;
}

std::vector<std::string> csv_column(const std::string& text, std::size_t col) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(cells, cell, ',');
    out.push_back(cell);
  }
  return out;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

int run_tool(const std::string& args) {
  const int status = std::system((std::string(AMC_TOOL_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunConfig, ParsesKnownKeys) {
  const auto c = parse_run_config(R"({"seed": 9, "lambda": 0.1, "alpha": 0.25, "lr": 0.05, "snr_list": [0, 4],
    "classes": ["BPSK", "8PSK"], "reduction": "sum", "epochs_stage1": 3, "epochs_stage2": 0, "batch_size": 32,
    "train_fraction": 0.5, "out_dir": "o", "dataset": "d.bin", "checkpoint": "c.bin", "feature_relu": false,
    "record_wall_time": true, "frame_len": 64, "samples_per_symbol": 4, "frames_per_class_per_snr": 7,
    "center_lr": 2e-4, "momentum": 0.8, "weight_decay": 0, "lr_step_epochs": 5, "lr_step_factor": 0.5,
    "early_stop_patience": 2, "threads": 1})");
  EXPECT_EQ(c.gen.seed, 9u);
  EXPECT_EQ(c.train.seed, 9u);
  EXPECT_EQ(c.train.lambda, 0.1);
  EXPECT_EQ(c.gen.snr_list, (std::vector<int>{0, 4}));
  EXPECT_EQ(c.gen.classes, (std::vector<signalgen::Modulation>{signalgen::Modulation::BPSK, signalgen::Modulation::PSK8}));
  EXPECT_EQ(c.train.reduction, loss::Reduction::Sum);
  EXPECT_FALSE(c.train.net.feature_relu);
  EXPECT_EQ(c.checkpoint, "c.bin");
  EXPECT_DOUBLE_EQ(c.train.effective_alpha(), 0.5);
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, UnknownKeyIsNamed) {
  try {
    parse_run_config(R"({"lambda": 0.1, "lamdba": 0.2})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lamdba"), std::string::npos);
  }
}

TEST(RunConfig, BadValuesRejected) {
  EXPECT_THROW(parse_run_config(R"({"lr": "fast"})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"epochs_stage1": -1})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"classes": ["FM"]})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"reduction": "max"})"), ConfigError);
  EXPECT_THROW(parse_run_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_run_config("{oops"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"train_fraction": 1.5})").validate(), ConfigError);
}

TEST(RunConfig, OverridesWin) {
  auto c = parse_run_config(R"({"seed": 1, "lambda": 0.1, "snr_list": [2]})");
  Overrides o;
  o.seed = 4;
  o.lambda = 0.0;
  o.snr_list = std::vector<int>{6, 8};
  o.epochs_stage2 = 0;
  o.out_dir = "x";
  apply_overrides(c, o);
  EXPECT_EQ(c.gen.seed, 4u);
  EXPECT_EQ(c.train.seed, 4u);
  EXPECT_EQ(c.train.lambda, 0.0);
  EXPECT_EQ(c.gen.snr_list, (std::vector<int>{6, 8}));
  EXPECT_EQ(c.train.epochs_stage2, 0u);
  EXPECT_EQ(c.out_dir, "x");
}

TEST(Commands, GenerateIsReproducible) {
  fixture::TempDir dir("gen");
  auto c = tiny_run(dir);
  std::ostringstream log;
  cmd_generate(c, log);
  EXPECT_NE(log.str().find("total_frames=72"), std::string::npos);
  EXPECT_NE(log.str().find("BPSK,10,12"), std::string::npos);
  const auto first = fixture::read_text(c.dataset);
  EXPECT_EQ(signalgen::read_dataset(c.dataset).size(), 72u);
  cmd_generate(c, log);
  EXPECT_EQ(fixture::read_text(c.dataset), first);
}

TEST(Commands, GenerateFullCorpusCount) {
  fixture::TempDir dir("genfull");
  RunConfig c;
  c.dataset = dir / "full.bin";
  std::ostringstream log;
  cmd_generate(c, log);
  EXPECT_NE(log.str().find("total_frames=88000"), std::string::npos);
}

TEST(Commands, TrainEvalFeaturesPca) {
  fixture::TempDir dir("pipeline");
  auto c = tiny_run(dir);
  std::ostringstream log;
  cmd_generate(c, log);
  cmd_train(c, log);
  EXPECT_TRUE(std::filesystem::exists(c.out_dir / "ckpt_s1.bin"));
  EXPECT_TRUE(std::filesystem::exists(c.out_dir / "ckpt_s2.bin"));
  const auto report = fixture::read_text(c.out_dir / "train_report.csv");
  EXPECT_EQ(line_count(report), 3u);

  std::ostringstream eval_out;
  cmd_eval(c, eval_out);
  const std::string line = eval_out.str();
  ASSERT_EQ(line.rfind("overall_accuracy=", 0), 0u);
  const double acc = std::stod(line.substr(17));
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
  const auto metrics = fixture::read_text(c.out_dir / "metrics.csv");
  const auto confusion = fixture::read_text(c.out_dir / "confusion.csv");
  EXPECT_EQ(metrics.rfind("snr_db,accuracy\n", 0), 0u);
  EXPECT_EQ(line_count(confusion), 9u);

  std::ostringstream again;
  cmd_eval(c, again);
  EXPECT_EQ(again.str(), line);
  EXPECT_EQ(fixture::read_text(c.out_dir / "metrics.csv"), metrics);
  EXPECT_EQ(fixture::read_text(c.out_dir / "confusion.csv"), confusion);

  cmd_features(c, log);
  cmd_pca(c, log);
  const auto features = fixture::read_text(c.out_dir / "features.csv");
  const auto pca = fixture::read_text(c.out_dir / "pca.csv");
  EXPECT_EQ(line_count(features), line_count(pca));
  EXPECT_EQ(line_count(features), 13u);  // header + 2 test frames from each of 6 groups
  EXPECT_EQ(pca.rfind("class,snr,pc1,pc2\n", 0), 0u);
}

TEST(Commands, SkippingSecondStageAndLambdaZero) {
  fixture::TempDir dir("nos2");
  auto c = tiny_run(dir);
  c.train.epochs_stage2 = 0;
  c.train.lambda = 0.0;
  c.train.epochs_stage1 = 2;
  std::ostringstream log;
  cmd_generate(c, log);
  cmd_train(c, log);
  std::set<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(c.out_dir)) files.insert(e.path().filename().string());
  EXPECT_EQ(files, (std::set<std::string>{"ckpt_s1.bin", "train_report.csv"}));
  for (const auto& v : csv_column(fixture::read_text(c.out_dir / "train_report.csv"), 4)) EXPECT_EQ(v, "0");
  // eval falls back to the S1 checkpoint
  EXPECT_NO_THROW(cmd_eval(c, log));
}

TEST(Commands, MissingInputsAreIoErrors) {
  fixture::TempDir dir("missing");
  auto c = tiny_run(dir);
  std::ostringstream log;
  EXPECT_THROW(cmd_train(c, log), IoError);
  cmd_generate(c, log);
  EXPECT_THROW(cmd_eval(c, log), IoError);
  c.checkpoint = dir / "nope.bin";
  EXPECT_THROW(cmd_features(c, log), IoError);
}

TEST(Commands, ExitCodes) {
  auto code = [](auto thrower) {
    try {
      thrower();
    } catch (...) {
      return exit_code_for(std::current_exception());
    }
    return -1;
  };
  EXPECT_EQ(code([] { throw ConfigError("x"); }), kExitUsage);
  EXPECT_EQ(code([] { throw IoError("x"); }), kExitIo);
  EXPECT_EQ(code([] { throw FormatError(FormatError::Kind::BadMagic, "x"); }), kExitIo);
  EXPECT_EQ(code([] { throw train::TrainingDiverged(train::Stage::S2, 3, 4); }), kExitDiverged);
}

TEST(Tool, ExitCodesEndToEnd) {
  fixture::TempDir dir("tool");
  const auto cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"classes": ["BPSK", "QPSK"], "snr_list": [10], "frames_per_class_per_snr": 16, "frame_len": 32,
               "samples_per_symbol": 4, "epochs_stage1": 1, "epochs_stage2": 0, "batch_size": 8})";
  }
  const std::string base = "--config " + cfg.string() + " --dataset " + (dir / "d.bin").string() + " --out-dir " +
                           (dir / "o").string();
  EXPECT_EQ(run_tool("generate " + base), 0);
  EXPECT_EQ(run_tool("train " + base + " --seed 2"), 0);
  EXPECT_EQ(run_tool("eval " + base + " --seed 2"), 0);
  EXPECT_EQ(run_tool("train " + base + " --lr 1e30"), 3);
  EXPECT_EQ(run_tool("eval " + base + " --checkpoint " + (dir / "none.bin").string()), 2);
  EXPECT_EQ(run_tool("train " + base + " --batch-size 1"), 1);
  EXPECT_EQ(run_tool("bogus"), 1);
  {
    std::ofstream out(cfg);
    out << R"({"epochs": 3})";
  }
  EXPECT_EQ(run_tool("generate --config " + cfg.string()), 1);
}
