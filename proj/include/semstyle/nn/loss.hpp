// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace semstyle::nn {

template <typename T>
struct SoftmaxXent {
  double loss = 0.0;      // -ln p(target)
  std::vector<T> probs;
};

// Max-subtracted softmax.
template <typename T>
void softmax(std::span<const T> logits, std::span<T> out);

// Throws ShapeError for empty logits or target out of range.
template <typename T>
SoftmaxXent<T> softmax_cross_entropy(std::span<const T> logits, std::size_t target);

// dlogits += scale * (probs - onehot(target))
template <typename T>
void softmax_xent_backward(std::span<const T> probs, std::size_t target, T scale, std::span<T> dlogits);

}  // namespace semstyle::nn
