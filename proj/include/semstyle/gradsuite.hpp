// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace semstyle::gradsuite {

struct LayerCheck {
  std::string layer;  // dense | embedding | gru | attention | output
  std::string shape;  // human-readable dimensions
  double max_relative_error = 0.0;
  std::string worst_tensor;
  std::size_t coordinates = 0;
  bool passed = false;
};

struct SuiteOptions {
  std::size_t shapes_per_layer = 5;
  std::uint64_t seed = 1;
  double tolerance = 1e-4;
};

// Finite-difference checks of every layer on random small shapes, in
// 64-bit arithmetic. Input gradients are checked alongside parameters.
std::vector<LayerCheck> run(const SuiteOptions& options = {});

}  // namespace semstyle::gradsuite
