// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semstyle/nn/layers.hpp"
#include "semstyle/rng.hpp"

namespace semstyle::models {

struct GruLmConfig {
  std::size_t vocab_size = 20000;
  std::size_t embed_dim = 512;
  std::size_t hidden_dim = 512;
  double dropout = 0.5;
};

template <typename T>
struct GruLmParams {
  using value_type = T;
  nn::Embedding<T> embed;
  nn::GruCell<T> gru;
  nn::Dense<T> out;

  GruLmParams() = default;
  explicit GruLmParams(const GruLmConfig& c)
      : embed(c.vocab_size, c.embed_dim), gru(c.embed_dim, c.hidden_dim), out(c.hidden_dim, c.vocab_size) {}

  void collect(nn::TensorRefs<T>& refs) {
    embed.collect("embed", refs);
    gru.collect("gru", refs);
    out.collect("out", refs);
  }
};

// Decoder-only next-word predictor: [BOS, w1..wn] -> [w1..wn, EOS].
template <typename T>
class GruLm {
 public:
  using Params = GruLmParams<T>;

  GruLm() = default;
  explicit GruLm(const GruLmConfig& config) : config_(config), params_(config) {}

  static GruLm create(const GruLmConfig& config, std::uint64_t seed);

  double loss(std::span<const int> words, Params* grad = nullptr, double grad_scale = 1.0,
              Rng* dropout_rng = nullptr) const;

  // log2 p of each target, EOS included.
  std::vector<double> log2_probs(std::span<const int> words) const;

  const GruLmConfig& config() const { return config_; }
  Params& params() { return params_; }
  const Params& params() const { return params_; }

 private:
  GruLmConfig config_;
  Params params_;
};

extern template class GruLm<float>;
extern template class GruLm<double>;

}  // namespace semstyle::models
