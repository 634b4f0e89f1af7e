#pragma once

#include <filesystem>

#include <cstddef>
#include <cstdint>
#include <vector>
#include "amc/signalgen/dataset.hpp"

namespace amc::signalgen {

inline constexpr char kDatasetMagic[4] = {'I', 'Q', 'D', 'S'};
inline constexpr std::uint16_t kDatasetVersion = 1;

// Binary layout, little-endian:
//   "IQDS" | u16 version | u32 frame_len | u64 frame_count | u8 class_count |
//   class_count x (u8 name_len, name bytes) |
//   frame_count x (u8 class_id | i16 snr_db | frame_len f32 I | frame_len f32 Q)
std::vector<std::byte> encode_dataset(const Dataset& dataset);
Dataset decode_dataset(std::vector<std::byte> bytes);

void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace amc::signalgen
