// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semstyle/nn/layers.hpp"
#include "semstyle/rng.hpp"
#include "semstyle/vocabulary.hpp"

namespace semstyle::models {

struct LangGenConfig {
  std::size_t in_vocab = 20000;  // term vocabulary, style tokens included
  std::size_t out_vocab = 20000;
  std::size_t term_embed_dim = 512;
  std::size_t word_embed_dim = 512;
  std::size_t encoder_hidden = 512;  // per direction
  // Decoder starts from [h_fwd,M+1, h_bak,1] instead of [h_fwd,M+1, h_bak,M+1].
  bool init_from_first_backward = false;
  double dropout = 0.5;
  std::size_t max_len = 30;

  // The decoder state is initialised with a concatenated encoder state.
  std::size_t decoder_hidden() const { return 2 * encoder_hidden; }
};

template <typename T>
struct LangGenParams {
  using value_type = T;
  nn::Embedding<T> term_embed;
  nn::GruCell<T> enc_fwd;
  nn::GruCell<T> enc_bwd;
  nn::Tensor<T> attn;  // W^a, 2H x 2H
  nn::Embedding<T> word_embed;
  nn::GruCell<T> dec;
  nn::Dense<T> out;  // [c_t; s_t] -> out_vocab

  LangGenParams() = default;
  explicit LangGenParams(const LangGenConfig& c);

  void collect(nn::TensorRefs<T>& refs) {
    term_embed.collect("term_embed", refs);
    enc_fwd.collect("enc_fwd", refs);
    enc_bwd.collect("enc_bwd", refs);
    refs.push_back({"attn.weight", &attn});
    word_embed.collect("word_embed", refs);
    dec.collect("dec", refs);
    out.collect("out", refs);
  }
};

template <typename T>
struct AttentionTrace {
  std::vector<std::vector<T>> weights;   // one row per decoder step, length M+1
  std::vector<std::vector<T>> contexts;  // c_t
};

template <typename T>
struct Encoding {
  std::vector<std::vector<T>> states;  // h_enc,i = [h_fwd,i; h_bak,i], i = 1..M+1
  std::vector<T> decoder_init;
};

template <typename T>
struct Generation {
  std::vector<int> words;  // without BOS/EOS
  AttentionTrace<T> trace;
};

// v_i = h_enc,i . (W^a s), a = softmax(v), c = sum_i a_i h_enc,i
template <typename T>
void attend(const nn::Tensor<T>& wa, const std::vector<std::vector<T>>& states, std::span<const T> s,
            std::vector<T>& weights, std::vector<T>& context);

inline int style_input_id(StyleToken s) { return static_cast<int>(Vocabulary::kSpecialCount) + static_cast<int>(s); }

// Bidirectional GRU encoder over terms with the style token appended,
// attention over encoder states, GRU decoder with output layer on [c_t; s_t].
template <typename T>
class LangGenModel {
 public:
  using Params = LangGenParams<T>;

  LangGenModel() = default;
  explicit LangGenModel(const LangGenConfig& config) : config_(config), params_(config) {}

  static LangGenModel create(const LangGenConfig& config, std::uint64_t seed);

  Encoding<T> encode(std::span<const int> terms, StyleToken style) const;
  // Encoder input ids as given (the caller supplies any style token).
  Encoding<T> encode_ids(std::span<const int> input) const;

  // Teacher-forced mean cross-entropy over [w1..wn, EOS]. Gradient and
  // dropout conventions follow TermGenModel::loss.
  double loss(std::span<const int> terms, StyleToken style, std::span<const int> target, Params* grad = nullptr,
              double grad_scale = 1.0, Rng* dropout_rng = nullptr, AttentionTrace<T>* trace = nullptr) const;
  double loss_ids(std::span<const int> input, std::span<const int> target, Params* grad = nullptr,
                  double grad_scale = 1.0, Rng* dropout_rng = nullptr, AttentionTrace<T>* trace = nullptr) const;

  // Greedy decoding with PAD, UNK and BOS masked out; ties to the lowest id.
  Generation<T> generate(std::span<const int> terms, StyleToken style, std::size_t max_len) const;
  Generation<T> generate(std::span<const int> terms, StyleToken style) const {
    return generate(terms, style, config_.max_len);
  }
  Generation<T> generate_ids(std::span<const int> input, std::size_t max_len) const;

  const LangGenConfig& config() const { return config_; }
  Params& params() { return params_; }
  const Params& params() const { return params_; }

 private:
  std::vector<int> with_style(std::span<const int> terms, StyleToken style) const;

  LangGenConfig config_;
  Params params_;
};

extern template class LangGenModel<float>;
extern template class LangGenModel<double>;

}  // namespace semstyle::models
