// SPDX-License-Identifier: Apache-2.0
#include "semstyle/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "semstyle/errors.hpp"

namespace semstyle::nn {

template <typename T>
void softmax(std::span<const T> logits, std::span<T> out) {
  if (logits.empty()) throw ShapeError("softmax: empty logits");
  if (out.size() != logits.size()) throw ShapeError("softmax: output size mismatch");
  const T mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = static_cast<T>(std::exp(static_cast<double>(logits[i] - mx)));
    sum += out[i];
  }
  const double inv = 1.0 / sum;
  for (auto& p : out) p = static_cast<T>(p * inv);
}

template <typename T>
SoftmaxXent<T> softmax_cross_entropy(std::span<const T> logits, std::size_t target) {
  if (logits.empty()) throw ShapeError("softmax_cross_entropy: empty logits");
  if (target >= logits.size()) throw ShapeError("softmax_cross_entropy: target out of range");
  SoftmaxXent<T> out;
  out.probs.resize(logits.size());
  const T mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += std::exp(static_cast<double>(logits[i] - mx));
  const double log_z = std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i)
    out.probs[i] = static_cast<T>(std::exp(static_cast<double>(logits[i] - mx) - log_z));
  out.loss = log_z - static_cast<double>(logits[target] - mx);
  return out;
}

template <typename T>
void softmax_xent_backward(std::span<const T> probs, std::size_t target, T scale, std::span<T> dlogits) {
  if (dlogits.size() != probs.size() || target >= probs.size())
    throw ShapeError("softmax_xent_backward: size mismatch");
  for (std::size_t i = 0; i < probs.size(); ++i) dlogits[i] += scale * probs[i];
  dlogits[target] -= scale;
}

template void softmax(std::span<const float>, std::span<float>);
template void softmax(std::span<const double>, std::span<double>);
template SoftmaxXent<float> softmax_cross_entropy(std::span<const float>, std::size_t);
template SoftmaxXent<double> softmax_cross_entropy(std::span<const double>, std::size_t);
template void softmax_xent_backward(std::span<const float>, std::size_t, float, std::span<float>);
template void softmax_xent_backward(std::span<const double>, std::size_t, double, std::span<double>);

}  // namespace semstyle::nn
