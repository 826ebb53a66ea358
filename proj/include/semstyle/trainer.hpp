// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semstyle/corpus.hpp"
#include "semstyle/model_io.hpp"
#include "semstyle/termpipe.hpp"

namespace semstyle::trainer {

// kCocoOnly trains on descriptive captions only, kRomOnly on styled text
// only, kJoint on balanced mixed batches of both.
enum class TrainMode { kJoint, kCocoOnly, kRomOnly };

std::string_view mode_name(TrainMode m);
TrainMode parse_mode(std::string_view name);  // joint | cocoonly | romonly

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 128;
  std::size_t epochs = 50;           // upper bound
  std::size_t patience = 3;          // epochs without validation gain; 0 disables
  double validation_fraction = 0.1;  // 0 trains on everything, no early stop
  std::size_t max_steps = 0;         // Adam steps; 0 is unbounded
  std::uint64_t seed = 1;
  double clip_min = -5.0;
  double clip_max = 5.0;
  double dropout = 0.5;
  TrainMode mode = TrainMode::kJoint;
  std::size_t term_vocab = 10000;
  std::size_t input_vocab = 20000;
  std::size_t output_vocab = 20000;
  std::size_t min_count = 1;
  std::size_t embed_dim = 512;
  std::size_t hidden_dim = 512;
  std::size_t feature_dim = corpus::kDefaultFeatureDim;
  std::size_t threads = 1;

  // UsageError on non-positive sizes or rates, lr < 0, or clip_min >= clip_max.
  void validate() const;
};

// Missing keys keep their defaults; unknown keys are rejected.
TrainConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const TrainConfig& c);
TrainConfig load_config(const std::string& path);

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;       // item-weighted mean over the epoch
  double validation_loss = 0.0;  // NaN without a validation split
  std::size_t steps = 0;         // cumulative Adam steps
};

struct TrainResult {
  std::vector<EpochStats> history;
  std::size_t steps = 0;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
  std::size_t descriptive_items = 0;  // training items consumed per source
  std::size_t styled_items = 0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

struct TermGenExample {
  std::size_t feature = 0;  // index into TermGenData::features
  std::vector<int> terms;
};

struct TermGenData {
  std::vector<std::vector<float>> features;
  std::vector<TermGenExample> examples;
};

struct Seq2SeqExample {
  std::vector<int> input;  // encoder ids, style token included
  std::vector<int> target;
};

// Low-level loops over prepared ids. Models are trained in place.
TrainResult fit_termgen(models::TermGenModel<float>& model, const TermGenData& data, const TrainConfig& cfg,
                        const EpochCallback& on_epoch = {});
// The mode in cfg selects which sources are used.
TrainResult fit_seq2seq(models::LangGenModel<float>& model, const std::vector<Seq2SeqExample>& descriptive,
                        const std::vector<Seq2SeqExample>& styled, const TrainConfig& cfg,
                        const EpochCallback& on_epoch = {});
TrainResult fit_gru_lm(models::GruLm<float>& model, const std::vector<std::vector<int>>& sentences,
                       const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// End-to-end: term extraction, vocabularies, model construction, training.
TermGenBundle train_termgen(const std::vector<corpus::CaptionRecord>& records,
                            const termpipe::TermPipeline& pipeline, const termpipe::FrameLexicon& lexicon,
                            const TrainConfig& cfg, TrainResult* result = nullptr,
                            const EpochCallback& on_epoch = {});

LangGenBundle train_langgen(const std::vector<std::vector<std::string>>& descriptive,
                            const std::vector<std::vector<std::string>>& styled,
                            const termpipe::TermPipeline& pipeline, const termpipe::FrameLexicon& lexicon,
                            const TrainConfig& cfg, TrainResult* result = nullptr,
                            const EpochCallback& on_epoch = {});

GruLmBundle train_gru_lm(const std::vector<std::vector<std::string>>& sentences, const TrainConfig& cfg,
                         TrainResult* result = nullptr, const EpochCallback& on_epoch = {});

// Rendered terms of a normalized sentence.
std::vector<std::string> sentence_terms(const std::vector<std::string>& tokens,
                                        const termpipe::TermPipeline& pipeline,
                                        const termpipe::FrameLexicon& lexicon);

std::vector<int> encode_terms(const Vocabulary& input, const std::vector<std::string>& terms, StyleToken style);

}  // namespace semstyle::trainer
