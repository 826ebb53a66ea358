// SPDX-License-Identifier: Apache-2.0
#include "semstyle/nn/layers.hpp"

#include <cmath>

#include "semstyle/errors.hpp"

namespace semstyle::nn {

namespace {

template <typename T>
T sigmoid(T a) {
  // Branch keeps exp() from overflowing for large |a|.
  if (a >= T(0)) {
    T e = std::exp(-a);
    return T(1) / (T(1) + e);
  }
  T e = std::exp(a);
  return e / (T(1) + e);
}

}  // namespace

template <typename T>
void Dense<T>::forward(std::span<const T> x, std::span<T> y) const {
  if (y.size() != out_dim()) throw ShapeError("Dense::forward: output size mismatch");
  std::copy(bias.data.begin(), bias.data.end(), y.begin());
  matvec_acc(weight, x, y);
}

template <typename T>
void Dense<T>::backward(std::span<const T> x, std::span<const T> dy, Dense& grad, std::span<T> dx) const {
  outer_acc(grad.weight, dy, x);
  add_to<T>(grad.bias.flat(), dy);
  if (!dx.empty()) matvec_t_acc(weight, dy, dx);
}

template <typename T>
std::span<const T> Embedding<T>::lookup(std::size_t id) const {
  if (id >= vocab_size()) throw ShapeError("Embedding::lookup: id out of range");
  return table.row(id);
}

template <typename T>
void Embedding<T>::backward(std::size_t id, std::span<const T> dy, Embedding& grad) const {
  if (id >= vocab_size()) throw ShapeError("Embedding::backward: id out of range");
  add_to<T>(grad.table.row(id), dy);
}

template <typename T>
void GruCell<T>::forward(std::span<const T> x, std::span<const T> h_prev, GruCache<T>& c) const {
  const std::size_t hd = hidden_dim();
  if (x.size() != input_dim()) throw ShapeError("GruCell: input dimension mismatch");
  if (h_prev.size() != hd) throw ShapeError("GruCell: hidden dimension mismatch");

  c.x.assign(x.begin(), x.end());
  c.h_prev.assign(h_prev.begin(), h_prev.end());

  // Pre-activations for all three blocks from the input path.
  std::vector<T> ax(b.data.begin(), b.data.end());
  matvec_acc<T>(w, x, ax);

  // Recurrent contributions for z and r use h_prev directly.
  std::vector<T> ah(2 * hd, T(0));
  const T* up = u.data.data();
  for (std::size_t row = 0; row < 2 * hd; ++row) {
    const T* ur = up + row * hd;
    T acc = T(0);
    for (std::size_t k = 0; k < hd; ++k) acc += ur[k] * h_prev[k];
    ah[row] = acc;
  }

  c.z.resize(hd);
  c.r.resize(hd);
  c.rh.resize(hd);
  for (std::size_t i = 0; i < hd; ++i) {
    c.z[i] = sigmoid(ax[i] + ah[i]);
    c.r[i] = sigmoid(ax[hd + i] + ah[hd + i]);
    c.rh[i] = c.r[i] * h_prev[i];
  }

  c.n.resize(hd);
  for (std::size_t i = 0; i < hd; ++i) {
    const T* ur = up + (2 * hd + i) * hd;
    T acc = T(0);
    for (std::size_t k = 0; k < hd; ++k) acc += ur[k] * c.rh[k];
    c.n[i] = std::tanh(ax[2 * hd + i] + acc);
  }

  c.h.resize(hd);
  for (std::size_t i = 0; i < hd; ++i) c.h[i] = c.z[i] * h_prev[i] + (T(1) - c.z[i]) * c.n[i];
}

template <typename T>
void GruCell<T>::backward(const GruCache<T>& c, std::span<const T> dh, GruCell& grad, std::span<T> dx,
                          std::span<T> dh_prev) const {
  const std::size_t hd = hidden_dim();
  if (dh.size() != hd) throw ShapeError("GruCell::backward: gradient size mismatch");

  // Gradients of the stacked pre-activations [z; r; n].
  std::vector<T> da(3 * hd, T(0));
  std::vector<T> dh_local(hd, T(0));
  for (std::size_t i = 0; i < hd; ++i) {
    const T dz = dh[i] * (c.h_prev[i] - c.n[i]);
    const T dn = dh[i] * (T(1) - c.z[i]);
    dh_local[i] = dh[i] * c.z[i];
    da[i] = dz * c.z[i] * (T(1) - c.z[i]);
    da[2 * hd + i] = dn * (T(1) - c.n[i] * c.n[i]);
  }

  // Candidate path: Un (r * h_prev).
  std::vector<T> drh(hd, T(0));
  const T* up = u.data.data();
  T* gu = grad.u.data.data();
  for (std::size_t i = 0; i < hd; ++i) {
    const T g = da[2 * hd + i];
    if (g == T(0)) continue;
    const T* ur = up + (2 * hd + i) * hd;
    T* gr = gu + (2 * hd + i) * hd;
    for (std::size_t k = 0; k < hd; ++k) {
      drh[k] += ur[k] * g;
      gr[k] += g * c.rh[k];
    }
  }
  for (std::size_t i = 0; i < hd; ++i) {
    const T dr = drh[i] * c.h_prev[i];
    dh_local[i] += drh[i] * c.r[i];
    da[hd + i] = dr * c.r[i] * (T(1) - c.r[i]);
  }

  // Recurrent z and r blocks.
  for (std::size_t row = 0; row < 2 * hd; ++row) {
    const T g = da[row];
    if (g == T(0)) continue;
    const T* ur = up + row * hd;
    T* gr = gu + row * hd;
    for (std::size_t k = 0; k < hd; ++k) {
      dh_local[k] += ur[k] * g;
      gr[k] += g * c.h_prev[k];
    }
  }

  outer_acc<T>(grad.w, da, c.x);
  add_to<T>(grad.b.flat(), da);
  if (!dx.empty()) matvec_t_acc<T>(w, da, dx);
  if (!dh_prev.empty()) add_to<T>(dh_prev, dh_local);
}

template <typename T>
std::vector<T> gru_step(const GruCell<T>& cell, std::span<const T> x, std::span<const T> h_prev) {
  GruCache<T> cache;
  cell.forward(x, h_prev, cache);
  return std::move(cache.h);
}

template struct Dense<float>;
template struct Dense<double>;
template struct Embedding<float>;
template struct Embedding<double>;
template struct GruCell<float>;
template struct GruCell<double>;
template std::vector<float> gru_step(const GruCell<float>&, std::span<const float>, std::span<const float>);
template std::vector<double> gru_step(const GruCell<double>&, std::span<const double>, std::span<const double>);

}  // namespace semstyle::nn
