// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semstyle/nn/layers.hpp"
#include "semstyle/rng.hpp"

namespace semstyle::models {

struct TermGenConfig {
  std::size_t feature_dim = 2048;
  std::size_t embed_dim = 512;
  std::size_t hidden_dim = 512;
  std::size_t vocab_size = 10000;
  bool tanh_projection = true;  // false: linear projection
  // Projected image as the initial hidden state instead of the step-0 input.
  bool image_as_h0 = false;
  double dropout = 0.5;
  std::size_t max_len = 20;
};

template <typename T>
struct TermGenParams {
  using value_type = T;
  nn::Dense<T> proj;  // feature -> embed_dim (hidden_dim when image_as_h0)
  nn::Embedding<T> embed;
  nn::GruCell<T> gru;
  nn::Dense<T> out;

  TermGenParams() = default;
  explicit TermGenParams(const TermGenConfig& c);

  void collect(nn::TensorRefs<T>& refs) {
    proj.collect("proj", refs);
    embed.collect("embed", refs);
    gru.collect("gru", refs);
    out.collect("out", refs);
  }
};

// Image-conditioned GRU over term ids. Step 0 consumes the projected
// feature; then [BOS, t1..tM] is fed to predict [t1..tM, EOS].
template <typename T>
class TermGenModel {
 public:
  using Params = TermGenParams<T>;

  TermGenModel() = default;
  explicit TermGenModel(const TermGenConfig& config) : config_(config), params_(config) {}

  static TermGenModel create(const TermGenConfig& config, std::uint64_t seed);

  // Mean cross-entropy over the M+1 targets. When `grad` is set, adds
  // grad_scale * d(loss) into it. Dropout is active iff `dropout_rng` is set.
  double loss(std::span<const float> feature, std::span<const int> terms, Params* grad = nullptr,
              double grad_scale = 1.0, Rng* dropout_rng = nullptr) const;

  // Greedy decoding; ties go to the lowest id. Returns term ids without
  // BOS/EOS.
  std::vector<int> decode(std::span<const float> feature, std::size_t max_len) const;
  std::vector<int> decode(std::span<const float> feature) const { return decode(feature, config_.max_len); }

  // Output distribution after each prefix of `terms` (M+1 rows).
  std::vector<std::vector<T>> step_distributions(std::span<const float> feature, std::span<const int> terms) const;

  const TermGenConfig& config() const { return config_; }
  Params& params() { return params_; }
  const Params& params() const { return params_; }

 private:
  std::vector<T> initial_state(std::span<const float> feature) const;

  TermGenConfig config_;
  Params params_;
};

extern template class TermGenModel<float>;
extern template class TermGenModel<double>;

}  // namespace semstyle::models
