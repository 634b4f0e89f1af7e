#include "amc/train/batching.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "amc/common/error.hpp"

namespace amc::train {

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t count, std::size_t batch_size,
                                                    std::mt19937_64& rng) {
  if (batch_size == 0) throw ValueError("epoch_batches: batch size must be >= 1");
  if (batch_size > count) {
    throw ValueError("epoch_batches: batch size " + std::to_string(batch_size) + " exceeds the " +
                     std::to_string(count) + " available samples");
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t first = 0; first < count; first += batch_size) {
    const auto last = std::min(count, first + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(first),
                         order.begin() + static_cast<std::ptrdiff_t>(last));
  }
  return batches;
}

}  // namespace amc::train
