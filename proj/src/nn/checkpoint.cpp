#include "amc/nn/checkpoint.hpp"

#include <map>
#include <string>

#include "amc/common/binary_io.hpp"
#include "amc/common/error.hpp"

namespace amc::nn {
namespace {

void put_tensor(binary::Writer& w, const std::string& name, const Tensor& t) {
  w.put<std::uint16_t>(static_cast<std::uint16_t>(name.size()));
  w.put_bytes(name);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(t.rank()));
  for (auto d : t.shape()) w.put<std::uint32_t>(static_cast<std::uint32_t>(d));
  for (float v : t.data()) w.put_f32(v);
}

FormatError invalid(const std::string& what) { return FormatError(FormatError::Kind::Invalid, "checkpoint: " + what); }

const Tensor& require(const std::map<std::string, Tensor>& entries, const std::string& name, std::size_t rank) {
  auto it = entries.find(name);
  if (it == entries.end()) throw invalid("missing parameter '" + name + "'");
  if (it->second.rank() != rank) throw invalid("parameter '" + name + "' has unexpected rank");
  return it->second;
}

}  // namespace

std::vector<std::byte> encode_checkpoint(const MSNetParams<float>& params, const Tensor* centers) {
  std::vector<std::pair<std::string, const Tensor*>> entries;
  visit_tensors(params, [&](const std::string& name, const Tensor& t, ParamKind) { entries.emplace_back(name, &t); });
  const Tensor relu_flag({}, params.config.feature_relu ? 1.0f : 0.0f);
  entries.emplace_back(kFeatureReluName, &relu_flag);
  if (centers != nullptr) entries.emplace_back(kCentersName, centers);

  binary::Writer w;
  w.put_bytes(std::string_view(kCheckpointMagic, 4));
  w.put<std::uint16_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(entries.size()));
  for (const auto& [name, t] : entries) put_tensor(w, name, *t);
  return w.bytes();
}

Checkpoint decode_checkpoint(std::vector<std::byte> bytes) {
  binary::Reader r(std::move(bytes), "checkpoint");
  if (r.remaining() < 4 || r.get_string(4) != std::string_view(kCheckpointMagic, 4)) {
    throw FormatError(FormatError::Kind::BadMagic, "checkpoint: bad magic (expected \"MSNC\")");
  }
  const auto version = r.get<std::uint16_t>();
  if (version != kCheckpointVersion) {
    throw FormatError(FormatError::Kind::BadVersion,
                      "checkpoint: unsupported version " + std::to_string(version) + " (expected 1)");
  }
  const auto count = r.get<std::uint32_t>();
  std::map<std::string, Tensor> entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name = r.get_string(r.get<std::uint16_t>());
    const auto rank = r.get<std::uint8_t>();
    Shape shape(rank);
    for (auto& d : shape) d = r.get<std::uint32_t>();
    const std::size_t n = shape_size(shape);
    if (n > r.remaining() / 4) {
      throw FormatError(FormatError::Kind::Truncated, "checkpoint: truncated data for '" + name + "'");
    }
    std::vector<float> data(n);
    for (auto& v : data) v = r.get_f32();
    if (!entries.emplace(name, Tensor(std::move(shape), std::move(data))).second) {
      throw invalid("duplicate parameter '" + name + "'");
    }
  }
  if (r.remaining() != 0) throw invalid("trailing bytes after the last parameter");

  MSNetConfig config;
  const auto& reduce = require(entries, "ms1.reduce.weight", 3);
  config.in_channels = reduce.dim(1);
  config.reduce_channels = reduce.dim(0);
  config.branch_channels = require(entries, "ms1.branch1.gather.weight", 3).dim(0);
  const auto& fc = require(entries, "fc.weight", 2);
  config.feature_dim = fc.dim(1);
  config.num_classes = require(entries, "classifier.weight", 2).dim(1);
  if (auto it = entries.find(kFeatureReluName); it != entries.end()) {
    if (it->second.size() != 1) throw invalid("malformed feature_relu flag");
    config.feature_relu = it->second[0] != 0.0f;
    entries.erase(it);
  }

  Checkpoint ckpt;
  ckpt.params = make_msnet<float>(config);
  visit_tensors(ckpt.params, [&](const std::string& name, Tensor& t, ParamKind) {
    auto it = entries.find(name);
    if (it == entries.end()) throw invalid("missing parameter '" + name + "'");
    if (it->second.shape() != t.shape()) {
      throw invalid("parameter '" + name + "' has shape " + shape_string(it->second.shape()) + ", expected " +
                    shape_string(t.shape()));
    }
    t = std::move(it->second);
    entries.erase(it);
  });
  if (auto it = entries.find(kCentersName); it != entries.end()) {
    if (it->second.rank() != 2 || it->second.dim(0) != config.num_classes || it->second.dim(1) != config.feature_dim) {
      throw invalid("centers have shape " + shape_string(it->second.shape()));
    }
    ckpt.centers = std::move(it->second);
    entries.erase(it);
  }
  if (!entries.empty()) throw invalid("unknown parameter '" + entries.begin()->first + "'");
  return ckpt;
}

void write_checkpoint(const std::filesystem::path& path, const MSNetParams<float>& params, const Tensor* centers) {
  binary::write_file(path, encode_checkpoint(params, centers));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(binary::read_file(path)); }

}  // namespace amc::nn
