#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace amc::train {

// A uniformly shuffled permutation of [0, count) cut into consecutive batches
// of batch_size; the final short batch is kept. Throws ValueError when
// batch_size is 0 or larger than count.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t count, std::size_t batch_size, std::mt19937_64& rng);

}  // namespace amc::train
