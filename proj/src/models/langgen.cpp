// SPDX-License-Identifier: Apache-2.0
#include "semstyle/models/langgen.hpp"

#include <algorithm>
#include <cmath>

#include "semstyle/errors.hpp"
#include "semstyle/nn/dropout.hpp"
#include "semstyle/nn/loss.hpp"

namespace semstyle::models {

template <typename T>
LangGenParams<T>::LangGenParams(const LangGenConfig& c)
    : term_embed(c.in_vocab, c.term_embed_dim),
      enc_fwd(c.term_embed_dim, c.encoder_hidden),
      enc_bwd(c.term_embed_dim, c.encoder_hidden),
      attn({c.decoder_hidden(), c.decoder_hidden()}),
      word_embed(c.out_vocab, c.word_embed_dim),
      dec(c.word_embed_dim, c.decoder_hidden()),
      out(2 * c.decoder_hidden(), c.out_vocab) {}

template <typename T>
void attend(const nn::Tensor<T>& wa, const std::vector<std::vector<T>>& states, std::span<const T> s,
            std::vector<T>& weights, std::vector<T>& context) {
  const std::size_t D = wa.rows();
  std::vector<T> u(D, T(0));
  nn::matvec_acc(wa, s, std::span<T>(u));
  std::vector<T> v(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) v[i] = nn::dot<T>(states[i], u);
  weights.assign(states.size(), T(0));
  nn::softmax<T>(v, weights);
  context.assign(D, T(0));
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t k = 0; k < D; ++k) context[k] += weights[i] * states[i][k];
}

template <typename T>
LangGenModel<T> LangGenModel<T>::create(const LangGenConfig& config, std::uint64_t seed) {
  if (config.in_vocab < Vocabulary::kSpecialCount + 2) throw UsageError("input vocabulary lacks style tokens");
  if (config.out_vocab <= Vocabulary::kSpecialCount) throw UsageError("output vocabulary too small");
  LangGenModel m(config);
  Rng rng = Rng::derive(seed, {0x1a9e});
  auto& p = m.params_;
  p.term_embed.init(rng);
  p.enc_fwd.init(rng);
  p.enc_bwd.init(rng);
  p.attn.fill_uniform(rng, nn::kInitScale);
  p.word_embed.init(rng);
  p.dec.init(rng);
  p.out.init(rng);
  return m;
}

template <typename T>
std::vector<int> LangGenModel<T>::with_style(std::span<const int> terms, StyleToken style) const {
  std::vector<int> ids(terms.begin(), terms.end());
  ids.push_back(style_input_id(style));
  return ids;
}

template <typename T>
Encoding<T> LangGenModel<T>::encode(std::span<const int> terms, StyleToken style) const {
  return encode_ids(with_style(terms, style));
}

template <typename T>
Encoding<T> LangGenModel<T>::encode_ids(std::span<const int> input) const {
  const auto& p = params_;
  const std::size_t L = input.size(), H = config_.encoder_hidden;
  if (L == 0) throw DataError("encoder input is empty");
  for (int id : input)
    if (id < 0 || static_cast<std::size_t>(id) >= config_.in_vocab) throw DataError("term id out of vocabulary range");
  std::vector<std::vector<T>> hf(L), hb(L);
  std::vector<T> h(H, T(0));
  for (std::size_t i = 0; i < L; ++i) {
    h = nn::gru_step<T>(p.enc_fwd, p.term_embed.lookup(static_cast<std::size_t>(input[i])), h);
    hf[i] = h;
  }
  h.assign(H, T(0));
  for (std::size_t i = L; i-- > 0;) {
    h = nn::gru_step<T>(p.enc_bwd, p.term_embed.lookup(static_cast<std::size_t>(input[i])), h);
    hb[i] = h;
  }
  Encoding<T> enc;
  enc.states.resize(L);
  for (std::size_t i = 0; i < L; ++i) {
    enc.states[i] = hf[i];
    enc.states[i].insert(enc.states[i].end(), hb[i].begin(), hb[i].end());
  }
  enc.decoder_init = hf[L - 1];
  const auto& b = config_.init_from_first_backward ? hb[0] : hb[L - 1];
  enc.decoder_init.insert(enc.decoder_init.end(), b.begin(), b.end());
  return enc;
}

template <typename T>
double LangGenModel<T>::loss(std::span<const int> terms, StyleToken style, std::span<const int> target, Params* grad,
                             double grad_scale, Rng* dropout_rng, AttentionTrace<T>* trace) const {
  return loss_ids(with_style(terms, style), target, grad, grad_scale, dropout_rng, trace);
}

template <typename T>
double LangGenModel<T>::loss_ids(std::span<const int> input, std::span<const int> target, Params* grad,
                                 double grad_scale, Rng* dropout_rng, AttentionTrace<T>* trace) const {
  const auto& p = params_;
  const std::size_t L = input.size(), H = config_.encoder_hidden, D = 2 * H;
  const std::size_t Et = config_.term_embed_dim, Ew = config_.word_embed_dim, V = config_.out_vocab;
  if (L == 0) throw DataError("encoder input is empty");
  for (int id : input)
    if (id < 0 || static_cast<std::size_t>(id) >= config_.in_vocab) throw DataError("term id out of vocabulary range");
  for (int id : target)
    if (id < 0 || static_cast<std::size_t>(id) >= V) throw DataError("word id out of vocabulary range");
  const bool training = dropout_rng != nullptr;
  Rng no_rng(0);
  Rng& rng = training ? *dropout_rng : no_rng;

  // Encoder.
  std::vector<std::vector<T>> x(L), xmask(L);
  for (std::size_t i = 0; i < L; ++i) {
    auto row = p.term_embed.lookup(static_cast<std::size_t>(input[i]));
    x[i].assign(row.begin(), row.end());
    xmask[i] = nn::dropout<T>(x[i], config_.dropout, rng, training);
  }
  std::vector<nn::GruCache<T>> cf(L), cb(L);
  std::vector<T> h(H, T(0));
  for (std::size_t i = 0; i < L; ++i) {
    p.enc_fwd.forward(x[i], h, cf[i]);
    h = cf[i].h;
  }
  h.assign(H, T(0));
  for (std::size_t i = L; i-- > 0;) {
    p.enc_bwd.forward(x[i], h, cb[i]);
    h = cb[i].h;
  }
  std::vector<std::vector<T>> enc(L, std::vector<T>(D));
  for (std::size_t i = 0; i < L; ++i) {
    std::copy(cf[i].h.begin(), cf[i].h.end(), enc[i].begin());
    std::copy(cb[i].h.begin(), cb[i].h.end(), enc[i].begin() + static_cast<std::ptrdiff_t>(H));
  }
  const std::size_t init_bwd = config_.init_from_first_backward ? 0 : L - 1;
  std::vector<T> s(D);
  std::copy(cf[L - 1].h.begin(), cf[L - 1].h.end(), s.begin());
  std::copy(cb[init_bwd].h.begin(), cb[init_bwd].h.end(), s.begin() + static_cast<std::ptrdiff_t>(H));

  // Decoder.
  const std::size_t steps = target.size() + 1;
  std::vector<int> dec_in(steps), dec_out(steps);
  dec_in[0] = Vocabulary::kBos;
  for (std::size_t t = 0; t < target.size(); ++t) {
    dec_in[t + 1] = target[t];
    dec_out[t] = target[t];
  }
  dec_out[steps - 1] = Vocabulary::kEos;

  std::vector<nn::GruCache<T>> cd(steps);
  std::vector<std::vector<T>> wmask(steps), a(steps), cs(steps), u(steps), probs(steps);
  std::vector<T> e(Ew), logits(V), ctx;
  double total = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    auto row = p.word_embed.lookup(static_cast<std::size_t>(dec_in[t]));
    e.assign(row.begin(), row.end());
    wmask[t] = nn::dropout<T>(e, config_.dropout, rng, training);
    p.dec.forward(e, s, cd[t]);
    s = cd[t].h;
    u[t].assign(D, T(0));
    nn::matvec_acc(p.attn, std::span<const T>(s), std::span<T>(u[t]));
    std::vector<T> v(L);
    for (std::size_t i = 0; i < L; ++i) v[i] = nn::dot<T>(enc[i], u[t]);
    a[t].assign(L, T(0));
    nn::softmax<T>(v, a[t]);
    cs[t].assign(2 * D, T(0));
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t k = 0; k < D; ++k) cs[t][k] += a[t][i] * enc[i][k];
    std::copy(s.begin(), s.end(), cs[t].begin() + static_cast<std::ptrdiff_t>(D));
    p.out.forward(cs[t], logits);
    auto sx = nn::softmax_cross_entropy<T>(logits, static_cast<std::size_t>(dec_out[t]));
    total += sx.loss;
    probs[t] = std::move(sx.probs);
    if (trace) {
      trace->weights.push_back(a[t]);
      trace->contexts.emplace_back(cs[t].begin(), cs[t].begin() + static_cast<std::ptrdiff_t>(D));
    }
  }
  const double mean = total / static_cast<double>(steps);
  if (!std::isfinite(mean)) throw NumericError("language generator loss is not finite");
  if (!grad) return mean;

  const T scale = static_cast<T>(grad_scale / static_cast<double>(steps));
  std::vector<std::vector<T>> denc(L, std::vector<T>(D, T(0)));
  std::vector<T> ds_next(D, T(0)), dlogits(V), dcs(2 * D), ds(D), du(D), da(L), de(Ew);
  for (std::size_t t = steps; t-- > 0;) {
    std::fill(dlogits.begin(), dlogits.end(), T(0));
    nn::softmax_xent_backward<T>(probs[t], static_cast<std::size_t>(dec_out[t]), scale, dlogits);
    std::fill(dcs.begin(), dcs.end(), T(0));
    p.out.backward(cs[t], dlogits, grad->out, dcs);
    for (std::size_t k = 0; k < D; ++k) ds[k] = dcs[D + k] + ds_next[k];
    std::span<const T> dc(dcs.data(), D);

    // Context and attention weights.
    T weighted = T(0);
    for (std::size_t i = 0; i < L; ++i) {
      da[i] = nn::dot<T>(enc[i], dc);
      weighted += a[t][i] * da[i];
      for (std::size_t k = 0; k < D; ++k) denc[i][k] += a[t][i] * dc[k];
    }
    std::fill(du.begin(), du.end(), T(0));
    for (std::size_t i = 0; i < L; ++i) {
      const T dv = a[t][i] * (da[i] - weighted);
      if (dv == T(0)) continue;
      for (std::size_t k = 0; k < D; ++k) {
        du[k] += dv * enc[i][k];
        denc[i][k] += dv * u[t][k];
      }
    }
    nn::outer_acc(grad->attn, std::span<const T>(du), std::span<const T>(cd[t].h));
    nn::matvec_t_acc(p.attn, std::span<const T>(du), std::span<T>(ds));

    std::fill(de.begin(), de.end(), T(0));
    std::fill(ds_next.begin(), ds_next.end(), T(0));
    p.dec.backward(cd[t], ds, grad->dec, de, ds_next);
    for (std::size_t k = 0; k < Ew; ++k) de[k] *= wmask[t][k];
    p.word_embed.backward(static_cast<std::size_t>(dec_in[t]), de, grad->word_embed);
  }

  // Decoder initial state flows back into the encoder.
  for (std::size_t k = 0; k < H; ++k) {
    denc[L - 1][k] += ds_next[k];
    denc[init_bwd][H + k] += ds_next[H + k];
  }

  std::vector<std::vector<T>> dx(L, std::vector<T>(Et, T(0)));
  std::vector<T> dh(H, T(0)), dh_prev(H);
  for (std::size_t i = L; i-- > 0;) {
    for (std::size_t k = 0; k < H; ++k) dh[k] += denc[i][k];
    std::fill(dh_prev.begin(), dh_prev.end(), T(0));
    p.enc_fwd.backward(cf[i], dh, grad->enc_fwd, dx[i], dh_prev);
    dh = dh_prev;
  }
  std::fill(dh.begin(), dh.end(), T(0));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t k = 0; k < H; ++k) dh[k] += denc[i][H + k];
    std::fill(dh_prev.begin(), dh_prev.end(), T(0));
    p.enc_bwd.backward(cb[i], dh, grad->enc_bwd, dx[i], dh_prev);
    dh = dh_prev;
  }
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t k = 0; k < Et; ++k) dx[i][k] *= xmask[i][k];
    p.term_embed.backward(static_cast<std::size_t>(input[i]), dx[i], grad->term_embed);
  }
  return mean;
}

template <typename T>
Generation<T> LangGenModel<T>::generate(std::span<const int> terms, StyleToken style, std::size_t max_len) const {
  return generate_ids(with_style(terms, style), max_len);
}

template <typename T>
Generation<T> LangGenModel<T>::generate_ids(std::span<const int> input, std::size_t max_len) const {
  if (max_len == 0) throw UsageError("max_len must be at least 1");
  const auto& p = params_;
  const auto enc = encode_ids(input);
  const std::size_t D = config_.decoder_hidden(), V = config_.out_vocab;
  std::vector<T> s = enc.decoder_init, weights, context, cs(2 * D), logits(V);
  Generation<T> g;
  int prev = Vocabulary::kBos;
  while (g.words.size() < max_len) {
    s = nn::gru_step<T>(p.dec, p.word_embed.lookup(static_cast<std::size_t>(prev)), s);
    attend<T>(p.attn, enc.states, s, weights, context);
    std::copy(context.begin(), context.end(), cs.begin());
    std::copy(s.begin(), s.end(), cs.begin() + static_cast<std::ptrdiff_t>(D));
    p.out.forward(cs, logits);
    g.trace.weights.push_back(weights);
    g.trace.contexts.push_back(context);
    // Ids below EOS are PAD, UNK and BOS, which are never emitted.
    std::size_t best = Vocabulary::kEos;
    for (std::size_t w = Vocabulary::kEos + 1; w < V; ++w)
      if (logits[w] > logits[best]) best = w;
    if (best == Vocabulary::kEos) break;
    g.words.push_back(static_cast<int>(best));
    prev = static_cast<int>(best);
  }
  return g;
}

template struct LangGenParams<float>;
template struct LangGenParams<double>;
template void attend<float>(const nn::Tensor<float>&, const std::vector<std::vector<float>>&, std::span<const float>,
                            std::vector<float>&, std::vector<float>&);
template void attend<double>(const nn::Tensor<double>&, const std::vector<std::vector<double>>&,
                             std::span<const double>, std::vector<double>&, std::vector<double>&);
template class LangGenModel<float>;
template class LangGenModel<double>;

}  // namespace semstyle::models
