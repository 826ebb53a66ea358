// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "semstyle/nn/tensor.hpp"

namespace semstyle::nn {

struct GradCheckOptions {
  // Step for the finite differences. Checks run on 64-bit parameters;
  // 1e-4 with the fourth-order stencil is the reference setting.
  double epsilon = 1e-4;
  // Coordinates sampled per tensor; tensors at or below this size are
  // checked exhaustively.
  std::size_t samples_per_tensor = 24;
  std::uint64_t seed = 0;
  // Denominator floor so that coordinates with vanishing gradient compare
  // by absolute difference.
  double floor = 1e-7;
  // Five-point stencil (O(eps^4)) instead of the plain three-point one.
  bool fourth_order = true;
  double tolerance = 1e-4;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
  bool passed = true;
};

// Compares `analytic` (already populated by the caller's backward pass)
// against central differences of `loss` over sampled coordinates of
// `params`. relative error = |a - n| / max(|a|, |n|, floor).
// Throws NumericError when the loss is not finite.
GradCheckResult grad_check(const std::function<double()>& loss, const TensorRefs<double>& params,
                           const TensorRefs<double>& analytic, const GradCheckOptions& options = {});

}  // namespace semstyle::nn
