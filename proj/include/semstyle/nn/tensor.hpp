// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"

namespace semstyle::nn {

// Dense row-major tensor. Parameters use T = float; the gradient checker
// instantiates the same code with T = double.
template <typename T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims)
      : shape(std::move(dims)), data(element_count(shape), T(0)) {}

  static std::size_t element_count(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  }

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  std::span<T> row(std::size_t r) { return {data.data() + r * cols(), cols()}; }
  std::span<const T> row(std::size_t r) const { return {data.data() + r * cols(), cols()}; }

  std::span<T> flat() { return data; }
  std::span<const T> flat() const { return data; }

  void zero() { std::fill(data.begin(), data.end(), T(0)); }

  void fill_uniform(Rng& rng, double scale) {
    for (auto& v : data) v = static_cast<T>(rng.uniform(-scale, scale));
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out;
    out.shape = shape;
    out.data.assign(data.begin(), data.end());
    return out;
  }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

// Named, non-owning view of a parameter (or gradient) tensor. Models list
// their tensors in a fixed order; that order is the checkpoint manifest order.
template <typename T>
struct TensorRef {
  std::string name;
  Tensor<T>* tensor;
};

template <typename T>
using TensorRefs = std::vector<TensorRef<T>>;

template <typename T>
void zero_all(const TensorRefs<T>& refs) {
  for (const auto& r : refs) r.tensor->zero();
}

template <typename T>
std::size_t total_elements(const TensorRefs<T>& refs) {
  std::size_t n = 0;
  for (const auto& r : refs) n += r.tensor->size();
  return n;
}

// y += W x  (W is rows x cols)
template <typename T>
void matvec_acc(const Tensor<T>& w, std::span<const T> x, std::span<T> y) {
  const std::size_t rows = w.rows(), cols = w.cols();
  if (x.size() != cols || y.size() != rows) throw ShapeError("matvec: dimension mismatch");
  const T* wp = w.data.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const T* wr = wp + r * cols;
    T acc = T(0);
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// x += W^T y
template <typename T>
void matvec_t_acc(const Tensor<T>& w, std::span<const T> y, std::span<T> x) {
  const std::size_t rows = w.rows(), cols = w.cols();
  if (x.size() != cols || y.size() != rows) throw ShapeError("matvec_t: dimension mismatch");
  const T* wp = w.data.data();
  T* xp = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const T yr = y[r];
    if (yr == T(0)) continue;
    const T* wr = wp + r * cols;
    for (std::size_t c = 0; c < cols; ++c) xp[c] += wr[c] * yr;
  }
}

// G += y x^T
template <typename T>
void outer_acc(Tensor<T>& g, std::span<const T> y, std::span<const T> x) {
  const std::size_t rows = g.rows(), cols = g.cols();
  if (x.size() != cols || y.size() != rows) throw ShapeError("outer: dimension mismatch");
  T* gp = g.data.data();
  const T* xp = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const T yr = y[r];
    if (yr == T(0)) continue;
    T* gr = gp + r * cols;
    for (std::size_t c = 0; c < cols; ++c) gr[c] += yr * xp[c];
  }
}

template <typename T>
void add_to(std::span<T> dst, std::span<const T> src) {
  if (dst.size() != src.size()) throw ShapeError("add_to: size mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw ShapeError("dot: size mismatch");
  T acc = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace semstyle::nn
