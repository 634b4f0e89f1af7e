#include "amc/cli/run_config.hpp"

#include <functional>
#include <map>
#include <nlohmann/json.hpp>

#include "amc/common/binary_io.hpp"
#include "amc/common/error.hpp"

namespace amc::cli {
namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& value, const std::string& key) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

double get_real(const json& value, const std::string& key) {
  if (!value.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return value.get<double>();
}

std::vector<signalgen::Modulation> get_classes(const json& value, const std::string& key) {
  std::vector<signalgen::Modulation> out;
  for (const auto& name : get_as<std::vector<std::string>>(value, key)) {
    const auto m = signalgen::parse_modulation(name);
    if (!m) throw ConfigError("config key '" + key + "': unknown modulation '" + name + "'");
    out.push_back(*m);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"frames_per_class_per_snr", [](RunConfig& c, const json& v, const std::string& k) { c.gen.frames_per_class_per_snr = get_count(v, k); }},
      {"snr_list", [](RunConfig& c, const json& v, const std::string& k) { c.gen.snr_list = get_as<std::vector<int>>(v, k); }},
      {"frame_len", [](RunConfig& c, const json& v, const std::string& k) { c.gen.frame_len = get_count(v, k); }},
      {"samples_per_symbol", [](RunConfig& c, const json& v, const std::string& k) { c.gen.samples_per_symbol = get_count(v, k); }},
      {"classes", [](RunConfig& c, const json& v, const std::string& k) { c.gen.classes = get_classes(v, k); }},
      {"seed", [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_number_unsigned()) throw ConfigError("config key '" + k + "' must be a non-negative integer");
         c.set_seed(v.get<std::uint64_t>());
       }},
      {"lr", [](RunConfig& c, const json& v, const std::string& k) { c.train.lr = get_real(v, k); }},
      {"momentum", [](RunConfig& c, const json& v, const std::string& k) { c.train.momentum = get_real(v, k); }},
      {"weight_decay", [](RunConfig& c, const json& v, const std::string& k) { c.train.weight_decay = get_real(v, k); }},
      {"epochs_stage1", [](RunConfig& c, const json& v, const std::string& k) { c.train.epochs_stage1 = get_count(v, k); }},
      {"epochs_stage2", [](RunConfig& c, const json& v, const std::string& k) { c.train.epochs_stage2 = get_count(v, k); }},
      {"batch_size", [](RunConfig& c, const json& v, const std::string& k) { c.train.batch_size = get_count(v, k); }},
      {"center_lr", [](RunConfig& c, const json& v, const std::string& k) { c.train.center_lr = get_real(v, k); }},
      {"lambda", [](RunConfig& c, const json& v, const std::string& k) { c.train.lambda = get_real(v, k); }},
      {"alpha", [](RunConfig& c, const json& v, const std::string& k) { c.train.alpha = get_real(v, k); }},
      {"reduction", [](RunConfig& c, const json& v, const std::string& k) {
         const auto s = get_as<std::string>(v, k);
         if (s == "mean") c.train.reduction = loss::Reduction::Mean;
         else if (s == "sum") c.train.reduction = loss::Reduction::Sum;
         else throw ConfigError("config key '" + k + "' must be \"mean\" or \"sum\"");
       }},
      {"lr_step_epochs", [](RunConfig& c, const json& v, const std::string& k) { c.train.lr_step_epochs = get_count(v, k); }},
      {"lr_step_factor", [](RunConfig& c, const json& v, const std::string& k) { c.train.lr_step_factor = get_real(v, k); }},
      {"early_stop_patience", [](RunConfig& c, const json& v, const std::string& k) { c.train.early_stop_patience = get_count(v, k); }},
      {"record_wall_time", [](RunConfig& c, const json& v, const std::string& k) { c.train.record_wall_time = get_as<bool>(v, k); }},
      {"feature_relu", [](RunConfig& c, const json& v, const std::string& k) { c.train.net.feature_relu = get_as<bool>(v, k); }},
      {"train_fraction", [](RunConfig& c, const json& v, const std::string& k) { c.train_fraction = get_real(v, k); }},
      {"dataset", [](RunConfig& c, const json& v, const std::string& k) { c.dataset = get_as<std::string>(v, k); }},
      {"checkpoint", [](RunConfig& c, const json& v, const std::string& k) { c.checkpoint = get_as<std::string>(v, k); }},
      {"out_dir", [](RunConfig& c, const json& v, const std::string& k) { c.out_dir = get_as<std::string>(v, k); }},
      {"threads", [](RunConfig& c, const json& v, const std::string& k) { c.threads = get_count(v, k); }},
  };
  return table;
}

}  // namespace

void RunConfig::set_seed(std::uint64_t seed) {
  gen.seed = seed;
  train.seed = seed;
}

void RunConfig::validate() const {
  gen.validate();
  train.validate();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must lie in (0, 1)");
}

std::filesystem::path RunConfig::checkpoint_for_eval() const {
  if (!checkpoint.empty()) return checkpoint;
  const auto s2 = out_dir / "ckpt_s2.bin";
  if (std::filesystem::exists(s2)) return s2;
  return out_dir / "ckpt_s1.bin";
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig config;
  // seed first so that nothing else depends on key order
  if (doc.contains("seed")) setters().at("seed")(config, doc.at("seed"), "seed");
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    if (key != "seed") it->second(config, value, key);
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto bytes = binary::read_file(path);
  std::string text(bytes.size(), '\0');
  for (std::size_t i = 0; i < bytes.size(); ++i) text[i] = static_cast<char>(bytes[i]);
  return parse_run_config(text);
}

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.seed) config.set_seed(*o.seed);
  if (o.lambda) config.train.lambda = *o.lambda;
  if (o.alpha) config.train.alpha = *o.alpha;
  if (o.lr) config.train.lr = *o.lr;
  if (o.epochs_stage1) config.train.epochs_stage1 = *o.epochs_stage1;
  if (o.epochs_stage2) config.train.epochs_stage2 = *o.epochs_stage2;
  if (o.batch_size) config.train.batch_size = *o.batch_size;
  if (o.snr_list) config.gen.snr_list = *o.snr_list;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.dataset) config.dataset = *o.dataset;
  if (o.checkpoint) config.checkpoint = *o.checkpoint;
}

}  // namespace amc::cli
