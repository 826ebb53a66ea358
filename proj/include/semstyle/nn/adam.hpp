// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "semstyle/nn/tensor.hpp"

namespace semstyle::nn {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Element-wise value clipping applied to gradients before the moments.
  double clip_min = -5.0;
  double clip_max = 5.0;
};

template <typename T>
struct AdamState {
  AdamConfig config;
  std::vector<Tensor<T>> first_moment;
  std::vector<Tensor<T>> second_moment;
  std::int64_t step = 0;

  AdamState() = default;
  AdamState(const TensorRefs<T>& params, AdamConfig cfg);
};

// One bias-corrected Adam step. `grads` must mirror `params` in order and
// shape. The gradient tensors are left unmodified.
template <typename T>
void adam_update(const TensorRefs<T>& params, const TensorRefs<T>& grads, AdamState<T>& state);

}  // namespace semstyle::nn
