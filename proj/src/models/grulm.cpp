// SPDX-License-Identifier: Apache-2.0
#include "semstyle/models/grulm.hpp"

#include <algorithm>
#include <cmath>

#include "semstyle/errors.hpp"
#include "semstyle/nn/dropout.hpp"
#include "semstyle/nn/loss.hpp"
#include "semstyle/vocabulary.hpp"

namespace semstyle::models {

template <typename T>
GruLm<T> GruLm<T>::create(const GruLmConfig& config, std::uint64_t seed) {
  if (config.vocab_size <= Vocabulary::kSpecialCount) throw UsageError("vocabulary too small");
  GruLm m(config);
  Rng rng = Rng::derive(seed, {0x6a11});
  m.params_.embed.init(rng);
  m.params_.gru.init(rng);
  m.params_.out.init(rng);
  return m;
}

template <typename T>
double GruLm<T>::loss(std::span<const int> words, Params* grad, double grad_scale, Rng* dropout_rng) const {
  const auto& p = params_;
  const std::size_t V = config_.vocab_size, E = config_.embed_dim, H = config_.hidden_dim;
  for (int id : words)
    if (id < 0 || static_cast<std::size_t>(id) >= V) throw DataError("word id out of vocabulary range");
  const bool training = dropout_rng != nullptr;
  Rng no_rng(0);
  Rng& rng = training ? *dropout_rng : no_rng;

  const std::size_t steps = words.size() + 1;
  std::vector<int> in(steps), target(steps);
  in[0] = Vocabulary::kBos;
  for (std::size_t t = 0; t < words.size(); ++t) {
    in[t + 1] = words[t];
    target[t] = words[t];
  }
  target[steps - 1] = Vocabulary::kEos;

  std::vector<nn::GruCache<T>> caches(steps);
  std::vector<std::vector<T>> masks(steps), probs(steps);
  std::vector<T> h(H, T(0)), e(E), logits(V);
  double total = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    auto row = p.embed.lookup(static_cast<std::size_t>(in[t]));
    e.assign(row.begin(), row.end());
    masks[t] = nn::dropout<T>(e, config_.dropout, rng, training);
    p.gru.forward(e, h, caches[t]);
    h = caches[t].h;
    p.out.forward(h, logits);
    auto sx = nn::softmax_cross_entropy<T>(logits, static_cast<std::size_t>(target[t]));
    total += sx.loss;
    probs[t] = std::move(sx.probs);
  }
  const double mean = total / static_cast<double>(steps);
  if (!std::isfinite(mean)) throw NumericError("language model loss is not finite");
  if (!grad) return mean;

  const T scale = static_cast<T>(grad_scale / static_cast<double>(steps));
  std::vector<T> dh_next(H, T(0)), dh(H), dlogits(V), de(E);
  for (std::size_t t = steps; t-- > 0;) {
    std::fill(dlogits.begin(), dlogits.end(), T(0));
    nn::softmax_xent_backward<T>(probs[t], static_cast<std::size_t>(target[t]), scale, dlogits);
    dh = dh_next;
    p.out.backward(caches[t].h, dlogits, grad->out, dh);
    std::fill(de.begin(), de.end(), T(0));
    std::fill(dh_next.begin(), dh_next.end(), T(0));
    p.gru.backward(caches[t], dh, grad->gru, de, dh_next);
    for (std::size_t k = 0; k < E; ++k) de[k] *= masks[t][k];
    p.embed.backward(static_cast<std::size_t>(in[t]), de, grad->embed);
  }
  return mean;
}

template <typename T>
std::vector<double> GruLm<T>::log2_probs(std::span<const int> words) const {
  const auto& p = params_;
  std::vector<T> h(config_.hidden_dim, T(0)), logits(config_.vocab_size);
  std::vector<double> out;
  int prev = Vocabulary::kBos;
  for (std::size_t t = 0; t <= words.size(); ++t) {
    const int target = t < words.size() ? words[t] : Vocabulary::kEos;
    if (target < 0 || static_cast<std::size_t>(target) >= config_.vocab_size)
      throw DataError("word id out of vocabulary range");
    h = nn::gru_step<T>(p.gru, p.embed.lookup(static_cast<std::size_t>(prev)), h);
    p.out.forward(h, logits);
    auto sx = nn::softmax_cross_entropy<T>(logits, static_cast<std::size_t>(target));
    out.push_back(-sx.loss / std::log(2.0));
    prev = target;
  }
  return out;
}

template struct GruLmParams<float>;
template struct GruLmParams<double>;
template class GruLm<float>;
template class GruLm<double>;

}  // namespace semstyle::models
