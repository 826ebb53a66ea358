// SPDX-License-Identifier: Apache-2.0
#include "semstyle/gradsuite.hpp"

#include <cmath>

#include "semstyle/models/langgen.hpp"
#include "semstyle/nn/gradcheck.hpp"
#include "semstyle/nn/layers.hpp"
#include "semstyle/nn/loss.hpp"

namespace semstyle::gradsuite {

namespace {

using nn::Tensor;
using nn::TensorRefs;

Tensor<double> random_tensor(Rng& rng, std::size_t n, double scale = 1.0) {
  Tensor<double> t({n});
  t.fill_uniform(rng, scale);
  return t;
}

std::size_t dim(Rng& rng, std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng.below(hi - lo + 1)); }

LayerCheck finish(std::string layer, std::string shape, const nn::GradCheckResult& r, double tol) {
  return {std::move(layer), std::move(shape), r.max_relative_error, r.worst_tensor, r.coordinates_checked,
          r.max_relative_error < tol};
}

nn::GradCheckOptions check_options(std::uint64_t seed) {
  nn::GradCheckOptions o;
  o.samples_per_tensor = 64;
  o.seed = seed;
  return o;
}

LayerCheck check_dense(Rng& rng, std::uint64_t seed, double tol) {
  const std::size_t in = dim(rng, 1, 9), out = dim(rng, 1, 9);
  nn::Dense<double> d(in, out), g(in, out);
  d.init(rng, 1.0);
  d.bias.fill_uniform(rng, 1.0);
  auto x = random_tensor(rng, in);
  auto c = random_tensor(rng, out);
  auto loss = [&] {
    std::vector<double> y(out);
    d.forward(x.data, y);
    double s = 0;
    for (std::size_t i = 0; i < out; ++i) s += c.data[i] * std::tanh(y[i]);
    return s;
  };
  std::vector<double> y(out), dy(out);
  d.forward(x.data, y);
  for (std::size_t i = 0; i < out; ++i) dy[i] = c.data[i] * (1 - std::tanh(y[i]) * std::tanh(y[i]));
  Tensor<double> dx({in});
  d.backward(x.data, dy, g, dx.data);
  TensorRefs<double> p, a;
  d.collect("dense", p);
  g.collect("dense", a);
  p.push_back({"x", &x});
  a.push_back({"x", &dx});
  return finish("dense", std::to_string(in) + "x" + std::to_string(out), nn::grad_check(loss, p, a, check_options(seed)),
                tol);
}

LayerCheck check_embedding(Rng& rng, std::uint64_t seed, double tol) {
  const std::size_t vocab = dim(rng, 2, 10), width = dim(rng, 1, 8), len = dim(rng, 1, 6);
  nn::Embedding<double> e(vocab, width), g(vocab, width);
  e.init(rng, 1.0);
  std::vector<std::size_t> ids(len);
  for (auto& id : ids) id = static_cast<std::size_t>(rng.below(vocab));
  std::vector<Tensor<double>> c;
  for (std::size_t t = 0; t < len; ++t) c.push_back(random_tensor(rng, width));
  auto loss = [&] {
    double s = 0;
    for (std::size_t t = 0; t < len; ++t) {
      auto v = e.lookup(ids[t]);
      for (std::size_t k = 0; k < width; ++k) s += c[t].data[k] * std::tanh(v[k]);
    }
    return s;
  };
  for (std::size_t t = 0; t < len; ++t) {
    auto v = e.lookup(ids[t]);
    std::vector<double> dy(width);
    for (std::size_t k = 0; k < width; ++k) dy[k] = c[t].data[k] * (1 - std::tanh(v[k]) * std::tanh(v[k]));
    e.backward(ids[t], dy, g);
  }
  TensorRefs<double> p, a;
  e.collect("embedding", p);
  g.collect("embedding", a);
  return finish("embedding", std::to_string(vocab) + "x" + std::to_string(width) + " len " + std::to_string(len),
                nn::grad_check(loss, p, a, check_options(seed)), tol);
}

LayerCheck check_gru(Rng& rng, std::uint64_t seed, double tol) {
  const std::size_t in = dim(rng, 1, 7), hidden = dim(rng, 1, 7);
  nn::GruCell<double> cell(in, hidden), g(in, hidden);
  cell.init(rng, 0.6);
  cell.b.fill_uniform(rng, 0.5);
  auto x = random_tensor(rng, in);
  auto h = random_tensor(rng, hidden, 0.9);
  auto c = random_tensor(rng, hidden);
  auto loss = [&] {
    auto out = nn::gru_step<double>(cell, x.data, h.data);
    return nn::dot<double>(out, c.data);
  };
  nn::GruCache<double> cache;
  cell.forward(x.data, h.data, cache);
  Tensor<double> dx({in}), dh({hidden});
  cell.backward(cache, c.data, g, dx.data, dh.data);
  TensorRefs<double> p, a;
  cell.collect("gru", p);
  g.collect("gru", a);
  p.push_back({"x", &x});
  a.push_back({"x", &dx});
  p.push_back({"h_prev", &h});
  a.push_back({"h_prev", &dh});
  return finish("gru", std::to_string(in) + "->" + std::to_string(hidden),
                nn::grad_check(loss, p, a, check_options(seed)), tol);
}

// The attention path is checked through the full sequence-to-sequence loss:
// W^a, the encoder states feeding the context and the decoder state feeding
// the scores all receive gradient only via attention.
LayerCheck check_attention(Rng& rng, std::uint64_t seed, double tol) {
  models::LangGenConfig cfg;
  cfg.in_vocab = dim(rng, 7, 12);
  cfg.out_vocab = dim(rng, 5, 12);
  cfg.term_embed_dim = dim(rng, 1, 5);
  cfg.word_embed_dim = dim(rng, 1, 5);
  cfg.encoder_hidden = dim(rng, 1, 4);
  cfg.dropout = 0.0;
  const std::size_t m = dim(rng, 1, 5), len = dim(rng, 1, 4);
  auto model = models::LangGenModel<double>::create(cfg, seed);
  {
    TensorRefs<double> p;
    model.params().collect(p);
    for (auto& r : p) r.tensor->fill_uniform(rng, 0.6);
  }
  std::vector<int> terms(m), target(len);
  for (auto& t : terms) t = static_cast<int>(6 + rng.below(cfg.in_vocab - 6));
  for (auto& t : target) t = static_cast<int>(4 + rng.below(cfg.out_vocab - 4));
  models::LangGenParams<double> g(cfg);
  model.loss(terms, StyleToken::kStyled, target, &g);
  auto loss = [&] { return model.loss(terms, StyleToken::kStyled, target); };
  TensorRefs<double> p, a;
  model.params().collect(p);
  g.collect(a);
  return finish("attention",
                "M=" + std::to_string(m) + " H=" + std::to_string(cfg.encoder_hidden) + " T=" + std::to_string(len),
                nn::grad_check(loss, p, a, check_options(seed)), tol);
}

LayerCheck check_output(Rng& rng, std::uint64_t seed, double tol) {
  const std::size_t in = dim(rng, 1, 9), vocab = dim(rng, 2, 12);
  nn::Dense<double> d(in, vocab), g(in, vocab);
  d.init(rng, 1.0);
  d.bias.fill_uniform(rng, 1.0);
  auto x = random_tensor(rng, in);
  const std::size_t target = static_cast<std::size_t>(rng.below(vocab));
  auto logits_of = [&] {
    std::vector<double> y(vocab);
    d.forward(x.data, y);
    return y;
  };
  auto loss = [&] {
    auto y = logits_of();
    return nn::softmax_cross_entropy<double>(y, target).loss;
  };
  auto y = logits_of();
  auto r = nn::softmax_cross_entropy<double>(y, target);
  std::vector<double> dy(vocab, 0.0);
  nn::softmax_xent_backward<double>(r.probs, target, 1.0, dy);
  Tensor<double> dx({in});
  d.backward(x.data, dy, g, dx.data);
  TensorRefs<double> p, a;
  d.collect("output", p);
  g.collect("output", a);
  p.push_back({"x", &x});
  a.push_back({"x", &dx});
  return finish("output", std::to_string(in) + "->" + std::to_string(vocab),
                nn::grad_check(loss, p, a, check_options(seed)), tol);
}

}  // namespace

std::vector<LayerCheck> run(const SuiteOptions& options) {
  using Check = LayerCheck (*)(Rng&, std::uint64_t, double);
  const Check checks[] = {check_dense, check_embedding, check_gru, check_attention, check_output};
  std::vector<LayerCheck> out;
  for (std::size_t l = 0; l < std::size(checks); ++l) {
    for (std::size_t s = 0; s < options.shapes_per_layer; ++s) {
      auto rng = Rng::derive(options.seed, {0x6c, l, s});
      out.push_back(checks[l](rng, options.seed + s, options.tolerance));
    }
  }
  return out;
}

}  // namespace semstyle::gradsuite
