#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "amc/signalgen/channel.hpp"
#include "amc/signalgen/modulation.hpp"

namespace amc::signalgen {

// One labeled 2 x N frame: row 0 in-phase, row 1 quadrature, stored row-major.
struct IQFrame {
  std::uint8_t class_id = 0;
  std::int16_t snr_db = 0;
  std::vector<float> samples;

  std::size_t length() const noexcept { return samples.size() / 2; }
  std::span<const float> in_phase() const noexcept { return {samples.data(), length()}; }
  std::span<const float> quadrature() const noexcept { return {samples.data() + length(), length()}; }

  friend bool operator==(const IQFrame&, const IQFrame&) = default;
};

// Builds a frame from a complex sequence. Throws ShapeError when
// signal.size() != frame_len.
IQFrame to_iq_frame(std::span<const Sample> signal, int class_id, int snr_db, std::size_t frame_len);

// Inverse of to_iq_frame (up to float precision).
std::vector<Sample> from_iq_frame(const IQFrame& frame);

struct GenConfig {
  std::size_t frames_per_class_per_snr = 1000;
  std::vector<int> snr_list = {-6, -4, -2, 0, 2, 4, 6, 8, 10, 12, 14};
  std::size_t frame_len = 128;
  std::size_t samples_per_symbol = 8;
  std::uint64_t seed = 0;
  std::vector<Modulation> classes{kAllModulations.begin(), kAllModulations.end()};

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

struct Dataset {
  std::size_t frame_len = 0;
  std::vector<std::string> class_names;
  std::vector<IQFrame> frames;

  std::size_t size() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// The eight class labels indexed by ordinal.
std::vector<std::string> default_class_names();

// Independent random stream for one frame, derived from (seed, frame index).
Rng frame_rng(std::uint64_t seed, std::uint64_t frame_index);

// Synthesizes one frame: random bits, a uniform integer timing offset within
// one symbol period, a uniform carrier phase in [0, 2pi), then AWGN.
IQFrame synthesize_frame(Modulation scheme, int snr_db, std::size_t frame_len, std::size_t sps, Rng& rng);

// Frames are ordered by (class in config order, snr in config order, index).
// The result depends only on `config`, never on the thread schedule.
Dataset generate_dataset(const GenConfig& config);

}  // namespace amc::signalgen
