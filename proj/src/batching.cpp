// SPDX-License-Identifier: Apache-2.0
#include "semstyle/batching.hpp"

#include <algorithm>
#include <numeric>
#include <span>

#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"

namespace semstyle {

namespace {

std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(v));
  return v;
}

}  // namespace

BatchPlan make_epoch_batches(std::size_t descriptive_size, std::size_t styled_size, std::size_t batch_size,
                             BatchMode mode, std::uint64_t seed, std::size_t epoch) {
  if (batch_size == 0) throw UsageError("batch size must be positive");
  BatchPlan plan;
  plan.epoch = epoch;
  Rng rng = Rng::derive(seed, {0xba7c4ULL, epoch});

  if (mode == BatchMode::kMixed) {
    if (batch_size % 2 != 0) throw UsageError("mixed batches need an even batch size");
    if (descriptive_size == 0 || styled_size == 0)
      throw UsageError("mixed batching needs both descriptive and styled items");
    const std::size_t per_source = std::min(descriptive_size, styled_size);
    auto desc = shuffled(descriptive_size, rng);
    auto sty = shuffled(styled_size, rng);
    desc.resize(per_source);
    sty.resize(per_source);
    const std::size_t half = batch_size / 2;
    for (std::size_t start = 0; start < per_source; start += half) {
      const std::size_t end = std::min(per_source, start + half);
      Batch b;
      b.descriptive.assign(desc.begin() + static_cast<std::ptrdiff_t>(start), desc.begin() + static_cast<std::ptrdiff_t>(end));
      b.styled.assign(sty.begin() + static_cast<std::ptrdiff_t>(start), sty.begin() + static_cast<std::ptrdiff_t>(end));
      plan.batches.push_back(std::move(b));
    }
    return plan;
  }

  if ((descriptive_size == 0) == (styled_size == 0))
    throw UsageError("single-source batching needs exactly one non-empty source");
  const bool use_desc = descriptive_size > 0;
  auto order = shuffled(use_desc ? descriptive_size : styled_size, rng);
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    Batch b;
    auto& dst = use_desc ? b.descriptive : b.styled;
    dst.assign(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
    plan.batches.push_back(std::move(b));
  }
  return plan;
}

}  // namespace semstyle
