// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace semstyle {

enum class BatchMode { kMixed, kSingle };

struct Batch {
  std::vector<std::size_t> descriptive;
  std::vector<std::size_t> styled;

  std::size_t size() const { return descriptive.size() + styled.size(); }
};

struct BatchPlan {
  std::size_t epoch = 0;
  std::vector<Batch> batches;
};

// Mixed mode down-samples the larger source to the size of the smaller
// one (fresh subset per epoch) and fills every batch with batch_size/2
// items from each. Single mode shuffles the one non-empty source into
// plain batches. The plan depends only on (sizes, batch_size, mode, seed,
// epoch).
BatchPlan make_epoch_batches(std::size_t descriptive_size, std::size_t styled_size, std::size_t batch_size,
                             BatchMode mode, std::uint64_t seed, std::size_t epoch = 0);

}  // namespace semstyle
