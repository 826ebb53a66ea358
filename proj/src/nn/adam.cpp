// SPDX-License-Identifier: Apache-2.0
#include "semstyle/nn/adam.hpp"

#include <algorithm>
#include <cmath>

#include "semstyle/errors.hpp"

namespace semstyle::nn {

template <typename T>
AdamState<T>::AdamState(const TensorRefs<T>& params, AdamConfig cfg) : config(cfg) {
  if (!(cfg.clip_min < cfg.clip_max)) throw UsageError("gradient clip bounds must satisfy min < max");
  for (const auto& p : params) {
    first_moment.emplace_back(p.tensor->shape);
    second_moment.emplace_back(p.tensor->shape);
  }
}

template <typename T>
void adam_update(const TensorRefs<T>& params, const TensorRefs<T>& grads, AdamState<T>& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size())
    throw ShapeError("adam_update: parameter/gradient/state count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].tensor->same_shape(*grads[i].tensor) || !params[i].tensor->same_shape(state.first_moment[i]))
      throw ShapeError("adam_update: shape mismatch for " + params[i].name);
  }

  const AdamConfig& c = state.config;
  ++state.step;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i].tensor->data;
    const auto& g = grads[i].tensor->data;
    auto& m = state.first_moment[i].data;
    auto& v = state.second_moment[i].data;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double gk = std::clamp(static_cast<double>(g[k]), c.clip_min, c.clip_max);
      const double mk = c.beta1 * m[k] + (1.0 - c.beta1) * gk;
      const double vk = c.beta2 * v[k] + (1.0 - c.beta2) * gk * gk;
      m[k] = static_cast<T>(mk);
      v[k] = static_cast<T>(vk);
      if (mk == 0.0) continue;
      const double step = c.learning_rate * (mk / bc1) / (std::sqrt(vk / bc2) + c.epsilon);
      p[k] = static_cast<T>(p[k] - step);
    }
  }
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_update(const TensorRefs<float>&, const TensorRefs<float>&, AdamState<float>&);
template void adam_update(const TensorRefs<double>&, const TensorRefs<double>&, AdamState<double>&);

}  // namespace semstyle::nn
