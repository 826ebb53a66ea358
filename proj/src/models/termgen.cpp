// SPDX-License-Identifier: Apache-2.0
#include "semstyle/models/termgen.hpp"

#include <algorithm>
#include <cmath>

#include "semstyle/errors.hpp"
#include "semstyle/nn/dropout.hpp"
#include "semstyle/nn/loss.hpp"
#include "semstyle/vocabulary.hpp"

namespace semstyle::models {

namespace {

template <typename T>
std::size_t argmax(std::span<const T> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

template <typename T>
TermGenParams<T>::TermGenParams(const TermGenConfig& c)
    : proj(c.feature_dim, c.image_as_h0 ? c.hidden_dim : c.embed_dim),
      embed(c.vocab_size, c.embed_dim),
      gru(c.embed_dim, c.hidden_dim),
      out(c.hidden_dim, c.vocab_size) {}

template <typename T>
TermGenModel<T> TermGenModel<T>::create(const TermGenConfig& config, std::uint64_t seed) {
  if (config.vocab_size <= Vocabulary::kSpecialCount) throw UsageError("term vocabulary too small");
  TermGenModel m(config);
  Rng rng = Rng::derive(seed, {0x7e4a});
  m.params_.proj.init(rng);
  m.params_.embed.init(rng);
  m.params_.gru.init(rng);
  m.params_.out.init(rng);
  return m;
}

template <typename T>
double TermGenModel<T>::loss(std::span<const float> feature, std::span<const int> terms, Params* grad,
                             double grad_scale, Rng* dropout_rng) const {
  const auto& p = params_;
  const std::size_t V = config_.vocab_size, E = config_.embed_dim, H = config_.hidden_dim;
  if (feature.size() != config_.feature_dim) throw DataError("feature has the wrong dimension");
  for (int id : terms)
    if (id < 0 || static_cast<std::size_t>(id) >= V) throw DataError("term id out of vocabulary range");
  const bool training = dropout_rng != nullptr;
  Rng no_rng(0);
  Rng& rng = training ? *dropout_rng : no_rng;

  // Image projection.
  std::vector<T> f(feature.begin(), feature.end());
  const std::size_t P = p.proj.out_dim();
  std::vector<T> img(P);
  p.proj.forward(f, img);
  if (config_.tanh_projection)
    for (auto& v : img) v = std::tanh(v);
  const std::vector<T> img_act = img;  // before dropout, for the tanh derivative
  const auto img_mask = nn::dropout<T>(img, config_.dropout, rng, training);

  std::vector<T> h0(H, T(0));
  nn::GruCache<T> cache0;
  if (config_.image_as_h0) {
    h0 = img;
  } else {
    p.gru.forward(img, h0, cache0);
    h0 = cache0.h;
  }

  const std::size_t steps = terms.size() + 1;
  std::vector<nn::GruCache<T>> caches(steps);
  std::vector<std::vector<T>> masks(steps), probs(steps);
  std::vector<int> inputs(steps), targets(steps);
  inputs[0] = Vocabulary::kBos;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    inputs[k + 1] = terms[k];
    targets[k] = terms[k];
  }
  targets[steps - 1] = Vocabulary::kEos;

  double total = 0.0;
  std::vector<T> h = h0, e(E), logits(V);
  for (std::size_t k = 0; k < steps; ++k) {
    auto row = p.embed.lookup(static_cast<std::size_t>(inputs[k]));
    e.assign(row.begin(), row.end());
    masks[k] = nn::dropout<T>(e, config_.dropout, rng, training);
    p.gru.forward(e, h, caches[k]);
    h = caches[k].h;
    p.out.forward(h, logits);
    auto sx = nn::softmax_cross_entropy<T>(logits, static_cast<std::size_t>(targets[k]));
    total += sx.loss;
    probs[k] = std::move(sx.probs);
  }
  const double mean = total / static_cast<double>(steps);
  if (!std::isfinite(mean)) throw NumericError("term generator loss is not finite");
  if (!grad) return mean;

  const T scale = static_cast<T>(grad_scale / static_cast<double>(steps));
  std::vector<T> dh_next(H, T(0)), dlogits(V), dh(H), de(E);
  for (std::size_t k = steps; k-- > 0;) {
    std::fill(dlogits.begin(), dlogits.end(), T(0));
    nn::softmax_xent_backward<T>(probs[k], static_cast<std::size_t>(targets[k]), scale, dlogits);
    dh = dh_next;
    p.out.backward(caches[k].h, dlogits, grad->out, dh);
    std::fill(de.begin(), de.end(), T(0));
    std::fill(dh_next.begin(), dh_next.end(), T(0));
    p.gru.backward(caches[k], dh, grad->gru, de, dh_next);
    for (std::size_t i = 0; i < E; ++i) de[i] *= masks[k][i];
    p.embed.backward(static_cast<std::size_t>(inputs[k]), de, grad->embed);
  }

  std::vector<T> dimg(P, T(0));
  if (config_.image_as_h0) {
    dimg = dh_next;
  } else {
    std::vector<T> unused(H, T(0));
    p.gru.backward(cache0, dh_next, grad->gru, dimg, unused);
  }
  for (std::size_t i = 0; i < P; ++i) {
    dimg[i] *= img_mask[i];
    if (config_.tanh_projection) dimg[i] *= T(1) - img_act[i] * img_act[i];
  }
  p.proj.backward(f, dimg, grad->proj, {});
  return mean;
}

template <typename T>
std::vector<T> TermGenModel<T>::initial_state(std::span<const float> feature) const {
  if (feature.size() != config_.feature_dim) throw DataError("feature has the wrong dimension");
  std::vector<T> f(feature.begin(), feature.end());
  std::vector<T> img(params_.proj.out_dim());
  params_.proj.forward(f, img);
  if (config_.tanh_projection)
    for (auto& v : img) v = std::tanh(v);
  if (config_.image_as_h0) return img;
  std::vector<T> h0(config_.hidden_dim, T(0));
  return nn::gru_step<T>(params_.gru, img, h0);
}

template <typename T>
std::vector<int> TermGenModel<T>::decode(std::span<const float> feature, std::size_t max_len) const {
  if (max_len == 0) throw UsageError("max_len must be at least 1");
  std::vector<T> h = initial_state(feature);
  std::vector<T> logits(config_.vocab_size);
  std::vector<int> out;
  int input = Vocabulary::kBos;
  while (out.size() < max_len) {
    h = nn::gru_step<T>(params_.gru, params_.embed.lookup(static_cast<std::size_t>(input)), h);
    params_.out.forward(h, logits);
    int next = static_cast<int>(argmax<T>(logits));
    if (next == Vocabulary::kEos) break;
    out.push_back(next);
    input = next;
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> TermGenModel<T>::step_distributions(std::span<const float> feature,
                                                                std::span<const int> terms) const {
  std::vector<T> h = initial_state(feature);
  std::vector<T> logits(config_.vocab_size);
  std::vector<std::vector<T>> out;
  int input = Vocabulary::kBos;
  for (std::size_t k = 0; k <= terms.size(); ++k) {
    h = nn::gru_step<T>(params_.gru, params_.embed.lookup(static_cast<std::size_t>(input)), h);
    params_.out.forward(h, logits);
    std::vector<T> probs(logits.size());
    nn::softmax<T>(logits, probs);
    out.push_back(std::move(probs));
    if (k < terms.size()) input = terms[k];
  }
  return out;
}

template struct TermGenParams<float>;
template struct TermGenParams<double>;
template class TermGenModel<float>;
template class TermGenModel<double>;

}  // namespace semstyle::models
