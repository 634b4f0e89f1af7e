#pragma once

#include <random>
#include <span>
#include <vector>

#include "amc/signalgen/modulation.hpp"

namespace amc::signalgen {

using Rng = std::mt19937_64;

// Mean of |s|^2 over the sequence; zero for an empty sequence.
double signal_power(std::span<const Sample> signal) noexcept;

// Adds circularly-symmetric white Gaussian noise. The per-complex-sample noise
// variance is P / 10^(snr_db/10) where P is the empirical power of `signal`;
// half of it goes to each of I and Q. An infinite snr_db returns the input
// unchanged. Throws ValueError on an empty signal.
std::vector<Sample> add_awgn(std::span<const Sample> signal, double snr_db, Rng& rng);

}  // namespace amc::signalgen
