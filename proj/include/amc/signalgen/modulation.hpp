#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace amc::signalgen {

using Sample = std::complex<double>;

// Class ordinals follow the alphabetical listing used for the RadioML digital
// subset. They are written to dataset files and must never be renumbered.
enum class Modulation : std::uint8_t {
  PSK8 = 0,
  BPSK = 1,
  CPFSK = 2,
  GFSK = 3,
  PAM4 = 4,
  QAM16 = 5,
  QAM64 = 6,
  QPSK = 7,
};

inline constexpr std::size_t kNumModulations = 8;

inline constexpr std::array<Modulation, kNumModulations> kAllModulations = {
    Modulation::PSK8, Modulation::BPSK,  Modulation::CPFSK, Modulation::GFSK,
    Modulation::PAM4, Modulation::QAM16, Modulation::QAM64, Modulation::QPSK};

constexpr int class_id(Modulation m) noexcept { return static_cast<int>(m); }

std::optional<Modulation> modulation_from_id(int id) noexcept;
std::string_view modulation_name(Modulation m) noexcept;
std::optional<Modulation> parse_modulation(std::string_view name) noexcept;

// Bits consumed per transmitted symbol.
std::size_t bits_per_symbol(Modulation m) noexcept;

// CPFSK and GFSK modulation index.
inline constexpr double kFskModulationIndex = 0.5;
// GFSK Gaussian filter bandwidth-time product and span in symbols.
inline constexpr double kGfskBt = 0.35;
inline constexpr std::size_t kGfskSpanSymbols = 4;

// Maps a bit stream to complex baseband at `sps` samples per symbol.
//
// Linear schemes (PSK, PAM, QAM) use Gray-coded constellations normalized to
// unit average symbol energy and rectangular pulses (each symbol held for
// `sps` samples). CPFSK and GFSK are binary, continuous-phase and constant
// envelope; the first symbol starts at phase zero.
//
// Throws ValueError when sps == 0 or bits.size() is not a multiple of
// bits_per_symbol(scheme), and when a bit value is not 0 or 1.
std::vector<Sample> modulate(Modulation scheme, std::span<const std::uint8_t> bits, std::size_t sps);

// Constellation point for one symbol of a linear scheme; `bits` holds exactly
// bits_per_symbol(scheme) bits, most significant first.
Sample map_symbol(Modulation scheme, std::span<const std::uint8_t> bits);

}  // namespace amc::signalgen
