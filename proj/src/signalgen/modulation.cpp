#include "amc/signalgen/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "amc/common/error.hpp"

namespace amc::signalgen {
namespace {

constexpr std::array<std::string_view, kNumModulations> kNames = {
    "8PSK", "BPSK", "CPFSK", "GFSK", "PAM4", "QAM16", "QAM64", "QPSK"};

unsigned bits_to_uint(std::span<const std::uint8_t> bits) {
  unsigned v = 0;
  for (auto b : bits) v = (v << 1) | b;
  return v;
}

unsigned gray_to_index(unsigned g) {
  unsigned p = g;
  for (unsigned shift = 1; shift < 8; shift <<= 1) p ^= p >> shift;
  return p;
}

// Gray-coded M-ary amplitude level 2p - (M - 1), unnormalized.
double gray_pam_level(std::span<const std::uint8_t> bits) {
  const unsigned levels = 1u << bits.size();
  const unsigned p = gray_to_index(bits_to_uint(bits));
  return 2.0 * p - (levels - 1.0);
}

bool is_fsk(Modulation m) { return m == Modulation::CPFSK || m == Modulation::GFSK; }

std::vector<double> gaussian_frequency_taps(std::size_t sps) {
  const std::size_t ntaps = kGfskSpanSymbols * sps + 1;
  const double sigma = std::sqrt(std::log(2.0)) / (2.0 * std::numbers::pi * kGfskBt);
  const double centre = static_cast<double>(ntaps - 1) / 2.0;
  std::vector<double> taps(ntaps);
  double sum = 0.0;
  for (std::size_t i = 0; i < ntaps; ++i) {
    const double t = (static_cast<double>(i) - centre) / static_cast<double>(sps);
    taps[i] = std::exp(-t * t / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

std::vector<Sample> modulate_fsk(Modulation scheme, std::span<const std::uint8_t> bits, std::size_t sps) {
  const std::size_t n = bits.size() * sps;
  std::vector<double> freq(n);
  for (std::size_t i = 0; i < n; ++i) freq[i] = bits[i / sps] ? 1.0 : -1.0;

  if (scheme == Modulation::GFSK) {
    const auto taps = gaussian_frequency_taps(sps);
    const auto centre = static_cast<std::ptrdiff_t>(taps.size() / 2);
    std::vector<double> shaped(n, 0.0);
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
    for (std::ptrdiff_t t = 0; t <= last; ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < taps.size(); ++i) {
        // replicate the edge symbols so the envelope stays constant
        const auto src = std::clamp<std::ptrdiff_t>(t + static_cast<std::ptrdiff_t>(i) - centre, 0, last);
        acc += taps[i] * freq[static_cast<std::size_t>(src)];
      }
      shaped[static_cast<std::size_t>(t)] = acc;
    }
    freq = std::move(shaped);
  }

  std::vector<Sample> out(n);
  const double step = std::numbers::pi * kFskModulationIndex / static_cast<double>(sps);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::polar(1.0, phase);
    phase = std::remainder(phase + step * freq[i], 2.0 * std::numbers::pi);
  }
  return out;
}

}  // namespace

std::optional<Modulation> modulation_from_id(int id) noexcept {
  if (id < 0 || id >= static_cast<int>(kNumModulations)) return std::nullopt;
  return static_cast<Modulation>(id);
}

std::string_view modulation_name(Modulation m) noexcept { return kNames[static_cast<std::size_t>(m)]; }

std::optional<Modulation> parse_modulation(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Modulation>(i);
  }
  return std::nullopt;
}

std::size_t bits_per_symbol(Modulation m) noexcept {
  switch (m) {
    case Modulation::BPSK:
    case Modulation::CPFSK:
    case Modulation::GFSK:
      return 1;
    case Modulation::QPSK:
    case Modulation::PAM4:
      return 2;
    case Modulation::PSK8:
      return 3;
    case Modulation::QAM16:
      return 4;
    case Modulation::QAM64:
      return 6;
  }
  return 0;
}

Sample map_symbol(Modulation scheme, std::span<const std::uint8_t> bits) {
  if (bits.size() != bits_per_symbol(scheme)) {
    throw ValueError("map_symbol: expected " + std::to_string(bits_per_symbol(scheme)) + " bits for " +
                     std::string(modulation_name(scheme)));
  }
  switch (scheme) {
    case Modulation::BPSK:
      return {bits[0] ? -1.0 : 1.0, 0.0};
    case Modulation::QPSK:
      return Sample{bits[0] ? -1.0 : 1.0, bits[1] ? -1.0 : 1.0} / std::numbers::sqrt2;
    case Modulation::PSK8: {
      const double p = gray_to_index(bits_to_uint(bits));
      return std::polar(1.0, 2.0 * std::numbers::pi * p / 8.0);
    }
    case Modulation::PAM4:
      return {gray_pam_level(bits) / std::sqrt(5.0), 0.0};
    case Modulation::QAM16:
      return Sample{gray_pam_level(bits.first(2)), gray_pam_level(bits.last(2))} / std::sqrt(10.0);
    case Modulation::QAM64:
      return Sample{gray_pam_level(bits.first(3)), gray_pam_level(bits.last(3))} / std::sqrt(42.0);
    case Modulation::CPFSK:
    case Modulation::GFSK:
      break;
  }
  throw ValueError("map_symbol: " + std::string(modulation_name(scheme)) + " has no constellation");
}

std::vector<Sample> modulate(Modulation scheme, std::span<const std::uint8_t> bits, std::size_t sps) {
  if (sps == 0) throw ValueError("modulate: samples per symbol must be >= 1");
  if (!modulation_from_id(static_cast<int>(scheme))) throw ValueError("modulate: unsupported scheme");
  const std::size_t k = bits_per_symbol(scheme);
  if (bits.size() % k != 0) {
    throw ValueError("modulate: " + std::to_string(bits.size()) + " bits is not a multiple of " + std::to_string(k) +
                     " for " + std::string(modulation_name(scheme)));
  }
  if (std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ValueError("modulate: bit values must be 0 or 1");
  }
  if (is_fsk(scheme)) return modulate_fsk(scheme, bits, sps);

  std::vector<Sample> out;
  out.reserve(bits.size() / k * sps);
  for (std::size_t i = 0; i < bits.size(); i += k) {
    const Sample s = map_symbol(scheme, bits.subspan(i, k));
    out.insert(out.end(), sps, s);
  }
  return out;
}

}  // namespace amc::signalgen
