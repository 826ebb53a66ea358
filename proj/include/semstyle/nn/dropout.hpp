// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"

namespace semstyle::nn {

// Inverted dropout mask: each entry is 0 with probability `rate`, otherwise
// 1/(1-rate). Outside training the mask is all ones.
template <typename T>
std::vector<T> dropout_mask(std::size_t n, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) throw UsageError("dropout rate must lie in [0, 1)");
  std::vector<T> mask(n, T(1));
  if (!training || rate == 0.0) return mask;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  for (auto& m : mask) m = rng.uniform() < rate ? T(0) : keep_scale;
  return mask;
}

// Applies dropout in place and returns the mask used.
template <typename T>
std::vector<T> dropout(std::span<T> x, double rate, Rng& rng, bool training) {
  auto mask = dropout_mask<T>(x.size(), rate, rng, training);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mask[i];
  return mask;
}

}  // namespace semstyle::nn
