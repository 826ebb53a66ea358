// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "semstyle/nn/tensor.hpp"
#include "semstyle/rng.hpp"

namespace semstyle::nn {

// Uniform half-width for weight initialisation; biases start at zero.
inline constexpr double kInitScale = 0.08;

// y = W x + b
template <typename T>
struct Dense {
  Tensor<T> weight;  // out x in
  Tensor<T> bias;    // out

  Dense() = default;
  Dense(std::size_t in, std::size_t out) : weight({out, in}), bias({out}) {}

  std::size_t in_dim() const { return weight.cols(); }
  std::size_t out_dim() const { return weight.rows(); }

  void init(Rng& rng, double scale = kInitScale) {
    weight.fill_uniform(rng, scale);
    bias.zero();
  }

  void forward(std::span<const T> x, std::span<T> y) const;

  // Accumulates parameter gradients into `grad` and adds W^T dy into dx
  // when dx is non-empty.
  void backward(std::span<const T> x, std::span<const T> dy, Dense& grad, std::span<T> dx) const;

  void collect(const std::string& prefix, TensorRefs<T>& out) {
    out.push_back({prefix + ".weight", &weight});
    out.push_back({prefix + ".bias", &bias});
  }
};

template <typename T>
struct Embedding {
  Tensor<T> table;  // vocab x dim

  Embedding() = default;
  Embedding(std::size_t vocab, std::size_t dim) : table({vocab, dim}) {}

  std::size_t vocab_size() const { return table.rows(); }
  std::size_t dim() const { return table.cols(); }

  void init(Rng& rng, double scale = kInitScale) { table.fill_uniform(rng, scale); }

  std::span<const T> lookup(std::size_t id) const;
  void backward(std::size_t id, std::span<const T> dy, Embedding& grad) const;

  void collect(const std::string& prefix, TensorRefs<T>& out) {
    out.push_back({prefix + ".table", &table});
  }
};

// Activations of one GRU step, kept for the backward pass.
template <typename T>
struct GruCache {
  std::vector<T> x, h_prev;
  std::vector<T> z, r, n;  // update gate, reset gate, candidate
  std::vector<T> rh;       // r * h_prev
  std::vector<T> h;        // output state
};

// Gated recurrent unit:
//   z = sigmoid(Wz x + Uz h + bz)
//   r = sigmoid(Wr x + Ur h + br)
//   n = tanh(Wn x + Un (r * h) + bn)
//   h' = z * h + (1 - z) * n
// Gate blocks are stacked [z; r; n] along the rows of W, U and b.
template <typename T>
struct GruCell {
  Tensor<T> w;  // 3H x In
  Tensor<T> u;  // 3H x H
  Tensor<T> b;  // 3H

  GruCell() = default;
  GruCell(std::size_t in, std::size_t hidden) : w({3 * hidden, in}), u({3 * hidden, hidden}), b({3 * hidden}) {}

  std::size_t input_dim() const { return w.cols(); }
  std::size_t hidden_dim() const { return u.cols(); }

  void init(Rng& rng, double scale = kInitScale) {
    w.fill_uniform(rng, scale);
    u.fill_uniform(rng, scale);
    b.zero();
  }

  void forward(std::span<const T> x, std::span<const T> h_prev, GruCache<T>& cache) const;

  // dx and dh_prev are accumulated into (+=); either may be empty.
  void backward(const GruCache<T>& cache, std::span<const T> dh, GruCell& grad, std::span<T> dx,
                std::span<T> dh_prev) const;

  void collect(const std::string& prefix, TensorRefs<T>& out) {
    out.push_back({prefix + ".w", &w});
    out.push_back({prefix + ".u", &u});
    out.push_back({prefix + ".b", &b});
  }
};

// One GRU step without keeping activations.
template <typename T>
std::vector<T> gru_step(const GruCell<T>& cell, std::span<const T> x, std::span<const T> h_prev);

}  // namespace semstyle::nn
