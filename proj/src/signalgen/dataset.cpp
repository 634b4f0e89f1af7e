#include "amc/signalgen/dataset.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "amc/common/error.hpp"
#include "amc/common/parallel.hpp"

namespace amc::signalgen {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

IQFrame to_iq_frame(std::span<const Sample> signal, int class_id, int snr_db, std::size_t frame_len) {
  if (signal.size() != frame_len) {
    throw ShapeError("to_iq_frame: signal has " + std::to_string(signal.size()) + " samples, frame_len is " +
                     std::to_string(frame_len));
  }
  if (class_id < 0 || class_id > 255) throw ValueError("to_iq_frame: class id out of range");
  if (snr_db < std::numeric_limits<std::int16_t>::min() || snr_db > std::numeric_limits<std::int16_t>::max()) {
    throw ValueError("to_iq_frame: snr out of range");
  }
  IQFrame frame;
  frame.class_id = static_cast<std::uint8_t>(class_id);
  frame.snr_db = static_cast<std::int16_t>(snr_db);
  frame.samples.resize(2 * frame_len);
  for (std::size_t t = 0; t < frame_len; ++t) {
    frame.samples[t] = static_cast<float>(signal[t].real());
    frame.samples[frame_len + t] = static_cast<float>(signal[t].imag());
  }
  return frame;
}

std::vector<Sample> from_iq_frame(const IQFrame& frame) {
  const auto i = frame.in_phase();
  const auto q = frame.quadrature();
  std::vector<Sample> out(frame.length());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = {i[t], q[t]};
  return out;
}

void GenConfig::validate() const {
  if (frame_len == 0) throw ConfigError("frame_len must be >= 1");
  if (samples_per_symbol == 0) throw ConfigError("samples_per_symbol must be >= 1");
  if (frame_len % samples_per_symbol != 0) {
    throw ConfigError("frame_len (" + std::to_string(frame_len) + ") must be divisible by samples_per_symbol (" +
                      std::to_string(samples_per_symbol) + ")");
  }
  if (snr_list.empty()) throw ConfigError("snr_list must not be empty");
  for (int s : snr_list) {
    if (s < std::numeric_limits<std::int16_t>::min() || s > std::numeric_limits<std::int16_t>::max()) {
      throw ConfigError("snr " + std::to_string(s) + " dB does not fit the dataset format");
    }
  }
  if (classes.empty()) throw ConfigError("classes must not be empty");
  if (std::set<Modulation>(classes.begin(), classes.end()).size() != classes.size()) {
    throw ConfigError("classes must not repeat");
  }
}

std::vector<std::string> default_class_names() {
  std::vector<std::string> names;
  for (auto m : kAllModulations) names.emplace_back(modulation_name(m));
  return names;
}

Rng frame_rng(std::uint64_t seed, std::uint64_t frame_index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(frame_index + 0x5851F42D4C957F2Dull)));
}

IQFrame synthesize_frame(Modulation scheme, int snr_db, std::size_t frame_len, std::size_t sps, Rng& rng) {
  // Guard symbols on both sides absorb the timing offset and filter transients.
  const std::size_t guard = kGfskSpanSymbols;
  const std::size_t symbols = frame_len / sps + 1 + 2 * guard;
  std::vector<std::uint8_t> bits(symbols * bits_per_symbol(scheme));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);

  std::uniform_int_distribution<std::size_t> offset_dist(0, sps - 1);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  const std::size_t offset = offset_dist(rng);
  const Sample rotation = std::polar(1.0, phase_dist(rng));

  const auto baseband = modulate(scheme, bits, sps);
  std::vector<Sample> window(frame_len);
  const std::size_t start = guard * sps + offset;
  for (std::size_t t = 0; t < frame_len; ++t) window[t] = baseband[start + t] * rotation;

  const auto noisy = add_awgn(window, static_cast<double>(snr_db), rng);
  return to_iq_frame(noisy, class_id(scheme), snr_db, frame_len);
}

Dataset generate_dataset(const GenConfig& config) {
  config.validate();
  const std::size_t per_class = config.snr_list.size() * config.frames_per_class_per_snr;
  const std::size_t total = config.classes.size() * per_class;

  Dataset ds;
  ds.frame_len = config.frame_len;
  ds.class_names = default_class_names();
  ds.frames.resize(total);
  amc::parallel_for(total, [&](std::size_t index) {
    const auto scheme = config.classes[index / per_class];
    const int snr = config.snr_list[(index % per_class) / config.frames_per_class_per_snr];
    auto rng = frame_rng(config.seed, index);
    ds.frames[index] = synthesize_frame(scheme, snr, config.frame_len, config.samples_per_symbol, rng);
  });
  return ds;
}

}  // namespace amc::signalgen
