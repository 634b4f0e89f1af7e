#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "amc/nn/msnet.hpp"
#include "amc/nn/tensor.hpp"

namespace amc::nn {

inline constexpr char kCheckpointMagic[4] = {'M', 'S', 'N', 'C'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

inline constexpr const char* kCentersName = "centers.c";
inline constexpr const char* kFeatureReluName = "meta.feature_relu";

struct Checkpoint {
  MSNetParams<float> params;
  std::optional<Tensor> centers;  // K x d class centers, when saved
};

// Binary layout, little-endian:
//   "MSNC" | u16 version | u32 param_count |
//   param_count x (u16 name_len, name, u8 rank, rank x u32 dims, f32 data)
// Every tensor of visit_tensors() is stored under its visit name, followed by
// the rank-0 entry "meta.feature_relu" (1 or 0) and, if given, "centers.c".
// The network configuration is recovered from the stored shapes.
std::vector<std::byte> encode_checkpoint(const MSNetParams<float>& params, const Tensor* centers = nullptr);
Checkpoint decode_checkpoint(std::vector<std::byte> bytes);

void write_checkpoint(const std::filesystem::path& path, const MSNetParams<float>& params,
                      const Tensor* centers = nullptr);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace amc::nn
