#include "amc/signalgen/channel.hpp"

#include <cmath>

#include "amc/common/error.hpp"

namespace amc::signalgen {

double signal_power(std::span<const Sample> signal) noexcept {
  if (signal.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : signal) acc += std::norm(s);
  return acc / static_cast<double>(signal.size());
}

std::vector<Sample> add_awgn(std::span<const Sample> signal, double snr_db, Rng& rng) {
  if (signal.empty()) throw ValueError("add_awgn: empty signal");
  std::vector<Sample> out(signal.begin(), signal.end());
  if (std::isinf(snr_db) && snr_db > 0) return out;

  const double noise_var = signal_power(signal) / std::pow(10.0, snr_db / 10.0);
  std::normal_distribution<double> noise(0.0, std::sqrt(noise_var / 2.0));
  for (auto& s : out) {
    const double re = noise(rng);
    const double im = noise(rng);
    s += Sample{re, im};
  }
  return out;
}

}  // namespace amc::signalgen
