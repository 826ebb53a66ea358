// SPDX-License-Identifier: Apache-2.0
#include "semstyle/trainer.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "semstyle/batching.hpp"
#include "semstyle/nn/adam.hpp"
#include "semstyle/text.hpp"

namespace semstyle::trainer {

using Json = nlohmann::ordered_json;
using corpus::Source;

std::string_view mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::kJoint: return "joint";
    case TrainMode::kCocoOnly: return "cocoonly";
    case TrainMode::kRomOnly: return "romonly";
  }
  return "joint";
}

TrainMode parse_mode(std::string_view name) {
  if (name == "joint") return TrainMode::kJoint;
  if (name == "cocoonly") return TrainMode::kCocoOnly;
  if (name == "romonly") return TrainMode::kRomOnly;
  throw UsageError("unknown training mode '" + std::string(name) + "' (joint, cocoonly, romonly)");
}

void TrainConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw UsageError(std::string(name) + " must be positive");
  };
  positive(batch_size, "batch_size");
  positive(epochs, "epochs");
  positive(term_vocab, "term_vocab");
  positive(input_vocab, "input_vocab");
  positive(output_vocab, "output_vocab");
  positive(min_count, "min_count");
  positive(embed_dim, "embed_dim");
  positive(hidden_dim, "hidden_dim");
  positive(feature_dim, "feature_dim");
  positive(threads, "threads");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw UsageError("learning_rate must be >= 0");
  if (!(clip_min < clip_max)) throw UsageError("clip_min must be below clip_max");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw UsageError("dropout must lie in [0, 1)");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw UsageError("validation_fraction must lie in [0, 1)");
}

Json to_json(const TrainConfig& c) {
  return Json{{"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size},
              {"epochs", c.epochs},
              {"patience", c.patience},
              {"validation_fraction", c.validation_fraction},
              {"max_steps", c.max_steps},
              {"seed", c.seed},
              {"clip_min", c.clip_min},
              {"clip_max", c.clip_max},
              {"dropout", c.dropout},
              {"mode", mode_name(c.mode)},
              {"term_vocab", c.term_vocab},
              {"input_vocab", c.input_vocab},
              {"output_vocab", c.output_vocab},
              {"min_count", c.min_count},
              {"embed_dim", c.embed_dim},
              {"hidden_dim", c.hidden_dim},
              {"feature_dim", c.feature_dim},
              {"threads", c.threads}};
}

TrainConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("training config must be a JSON object");
  TrainConfig c;
  const Json defaults = to_json(c);
  try {
    for (const auto& [key, value] : j.items()) {
      if (!defaults.contains(key)) throw UsageError("unknown training config key '" + key + "'");
      if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "epochs") c.epochs = value.get<std::size_t>();
      else if (key == "patience") c.patience = value.get<std::size_t>();
      else if (key == "validation_fraction") c.validation_fraction = value.get<double>();
      else if (key == "max_steps") c.max_steps = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "clip_min") c.clip_min = value.get<double>();
      else if (key == "clip_max") c.clip_max = value.get<double>();
      else if (key == "dropout") c.dropout = value.get<double>();
      else if (key == "mode") c.mode = parse_mode(value.get<std::string>());
      else if (key == "term_vocab") c.term_vocab = value.get<std::size_t>();
      else if (key == "input_vocab") c.input_vocab = value.get<std::size_t>();
      else if (key == "output_vocab") c.output_vocab = value.get<std::size_t>();
      else if (key == "min_count") c.min_count = value.get<std::size_t>();
      else if (key == "embed_dim") c.embed_dim = value.get<std::size_t>();
      else if (key == "hidden_dim") c.hidden_dim = value.get<std::size_t>();
      else if (key == "feature_dim") c.feature_dim = value.get<std::size_t>();
      else if (key == "threads") c.threads = value.get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad training config value: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open training config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return config_from_json(j);
}

namespace {

template <typename P>
nn::TensorRefs<float> refs(P& p) {
  nn::TensorRefs<float> r;
  p.collect(r);
  return r;
}

// Seeded split into (train, validation) positions; validation takes
// floor(n * fraction) items.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(std::size_t n, double fraction,
                                                                    std::uint64_t seed, std::uint64_t key) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction));
  if (n_val == 0) return {idx, {}};
  auto rng = Rng::derive(seed, {0x5b117, key});
  rng.shuffle(std::span<std::size_t>(idx));
  std::vector<std::size_t> val(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {train, val};
}

struct Item {
  Source source;
  std::size_t index;  // dataset index, not split position
};

// Per-item loss with gradient accumulation into `grad` (may be null).
template <typename Model>
using ItemLoss = std::function<double(const Model&, const Item&, typename Model::Params*, double, Rng*)>;

template <typename Model>
TrainResult run_loop(Model& model, const std::vector<std::size_t>& train_desc,
                     const std::vector<std::size_t>& train_sty, const std::vector<Item>& validation,
                     BatchMode mode, const ItemLoss<Model>& item_loss, const TrainConfig& cfg,
                     const EpochCallback& on_epoch) {
  using Params = typename Model::Params;
  cfg.validate();
  if (train_desc.empty() && train_sty.empty()) throw DataError("training set is empty");

  nn::AdamConfig ac;
  ac.learning_rate = cfg.learning_rate;
  ac.clip_min = cfg.clip_min;
  ac.clip_max = cfg.clip_max;
  auto param_refs = refs(model.params());
  nn::AdamState<float> adam(param_refs, ac);

  const std::size_t threads = cfg.threads;
  std::vector<Params> grads(threads, Params(model.config()));
  std::vector<nn::TensorRefs<float>> grad_refs;
  for (auto& g : grads) grad_refs.push_back(refs(g));

  TrainResult result;
  const bool early = !validation.empty();
  double best = std::numeric_limits<double>::infinity();
  std::optional<Params> best_params;
  std::size_t since_best = 0;

  auto validate = [&] {
    double sum = 0.0;
    for (const auto& it : validation) sum += item_loss(model, it, nullptr, 1.0, nullptr);
    return sum / static_cast<double>(validation.size());
  };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto plan = make_epoch_batches(train_desc.size(), train_sty.size(), cfg.batch_size, mode, cfg.seed, epoch);
    double epoch_sum = 0.0;
    std::size_t epoch_items = 0;
    bool out_of_steps = false;
    for (std::size_t b = 0; b < plan.batches.size(); ++b) {
      std::vector<Item> items;
      for (auto p : plan.batches[b].descriptive) items.push_back({Source::kDescriptive, train_desc[p]});
      for (auto p : plan.batches[b].styled) items.push_back({Source::kStyled, train_sty[p]});
      const std::size_t n = items.size();
      const double scale = 1.0 / static_cast<double>(n);
      const std::size_t workers = std::min(threads, n);
      const std::size_t chunk = (n + workers - 1) / workers;
      std::vector<double> partial(workers, 0.0);
      auto work = [&](std::size_t w) {
        nn::zero_all(grad_refs[w]);
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) {
          auto rng = Rng::derive(cfg.seed, {0xd209, epoch, b, i});
          partial[w] += item_loss(model, items[i], &grads[w], scale, &rng);
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
      }
      double batch_sum = 0.0;
      for (std::size_t w = 0; w < workers; ++w) batch_sum += partial[w];
      if (!std::isfinite(batch_sum))
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                           std::to_string(b + 1));
      for (std::size_t w = 1; w < workers; ++w)
        for (std::size_t t = 0; t < grad_refs[0].size(); ++t) {
          auto& dst = grad_refs[0][t].tensor->data;
          const auto& src = grad_refs[w][t].tensor->data;
          for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
        }
      nn::adam_update(param_refs, grad_refs[0], adam);
      ++result.steps;
      epoch_sum += batch_sum;
      epoch_items += n;
      result.descriptive_items += plan.batches[b].descriptive.size();
      result.styled_items += plan.batches[b].styled.size();
      if (cfg.max_steps != 0 && result.steps >= cfg.max_steps) {
        out_of_steps = true;
        break;
      }
    }

    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.train_loss = epoch_items ? epoch_sum / static_cast<double>(epoch_items) : 0.0;
    stats.validation_loss = early ? validate() : std::numeric_limits<double>::quiet_NaN();
    stats.steps = result.steps;
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);

    if (early) {
      if (stats.validation_loss < best) {
        best = stats.validation_loss;
        best_params = model.params();
        result.best_epoch = stats.epoch;
        since_best = 0;
      } else if (cfg.patience != 0 && ++since_best >= cfg.patience) {
        result.early_stopped = true;
        break;
      }
    } else {
      result.best_epoch = stats.epoch;
    }
    if (out_of_steps) break;
  }
  if (best_params) model.params() = *best_params;
  return result;
}

std::vector<Item> items_at(Source s, const std::vector<std::size_t>& positions) {
  std::vector<Item> out;
  for (auto p : positions) out.push_back({s, p});
  return out;
}

}  // namespace

TrainResult fit_termgen(models::TermGenModel<float>& model, const TermGenData& data, const TrainConfig& cfg,
                        const EpochCallback& on_epoch) {
  if (data.examples.empty()) throw DataError("term generator training set is empty");
  for (const auto& e : data.examples)
    if (e.feature >= data.features.size()) throw DataError("example refers to a missing image feature");
  auto [train, val] = split(data.examples.size(), cfg.validation_fraction, cfg.seed, 1);
  ItemLoss<models::TermGenModel<float>> loss = [&](const auto& m, const Item& it, auto* grad, double scale,
                                                   Rng* rng) {
    const auto& e = data.examples[it.index];
    return m.loss(data.features[e.feature], e.terms, grad, scale, rng);
  };
  return run_loop(model, train, {}, items_at(Source::kDescriptive, val), BatchMode::kSingle, loss, cfg, on_epoch);
}

TrainResult fit_seq2seq(models::LangGenModel<float>& model, const std::vector<Seq2SeqExample>& descriptive,
                        const std::vector<Seq2SeqExample>& styled, const TrainConfig& cfg,
                        const EpochCallback& on_epoch) {
  const bool use_desc = cfg.mode != TrainMode::kRomOnly;
  const bool use_sty = cfg.mode != TrainMode::kCocoOnly;
  if (cfg.mode == TrainMode::kJoint && (descriptive.empty() || styled.empty()))
    throw DataError("joint training needs both descriptive and styled sentences");
  if (use_desc && !use_sty && descriptive.empty()) throw DataError("no descriptive sentences to train on");
  if (use_sty && !use_desc && styled.empty()) throw DataError("no styled sentences to train on");

  std::vector<std::size_t> td, ts;
  std::vector<Item> val;
  if (use_desc) {
    auto [t, v] = split(descriptive.size(), cfg.validation_fraction, cfg.seed, 2);
    td = std::move(t);
    for (auto& it : items_at(Source::kDescriptive, v)) val.push_back(it);
  }
  if (use_sty) {
    auto [t, v] = split(styled.size(), cfg.validation_fraction, cfg.seed, 3);
    ts = std::move(t);
    for (auto& it : items_at(Source::kStyled, v)) val.push_back(it);
  }
  ItemLoss<models::LangGenModel<float>> loss = [&](const auto& m, const Item& it, auto* grad, double scale,
                                                   Rng* rng) {
    const auto& e = (it.source == Source::kStyled ? styled : descriptive)[it.index];
    return m.loss_ids(e.input, e.target, grad, scale, rng);
  };
  const auto mode = cfg.mode == TrainMode::kJoint ? BatchMode::kMixed : BatchMode::kSingle;
  return run_loop(model, td, ts, val, mode, loss, cfg, on_epoch);
}

TrainResult fit_gru_lm(models::GruLm<float>& model, const std::vector<std::vector<int>>& sentences,
                       const TrainConfig& cfg, const EpochCallback& on_epoch) {
  if (sentences.empty()) throw DataError("language model training set is empty");
  auto [train, val] = split(sentences.size(), cfg.validation_fraction, cfg.seed, 4);
  ItemLoss<models::GruLm<float>> loss = [&](const auto& m, const Item& it, auto* grad, double scale, Rng* rng) {
    return m.loss(sentences[it.index], grad, scale, rng);
  };
  return run_loop(model, train, {}, items_at(Source::kDescriptive, val), BatchMode::kSingle, loss, cfg, on_epoch);
}

std::vector<std::string> sentence_terms(const std::vector<std::string>& tokens,
                                        const termpipe::TermPipeline& pipeline,
                                        const termpipe::FrameLexicon& lexicon) {
  return pipeline.extract_terms(text::join(tokens), lexicon).rendered();
}

std::vector<int> encode_terms(const Vocabulary& input, const std::vector<std::string>& terms, StyleToken style) {
  auto ids = input.encode(terms);
  ids.push_back(input.style_id(style));
  return ids;
}

TermGenBundle train_termgen(const std::vector<corpus::CaptionRecord>& records,
                            const termpipe::TermPipeline& pipeline, const termpipe::FrameLexicon& lexicon,
                            const TrainConfig& cfg, TrainResult* result, const EpochCallback& on_epoch) {
  cfg.validate();
  if (records.empty()) throw DataError("no caption records to train on");
  std::vector<std::vector<std::string>> term_lists;
  TermGenData data;
  for (const auto& r : records) {
    if (r.feature.size() != cfg.feature_dim)
      throw DataError("image " + r.image_id + " has " + std::to_string(r.feature.size()) +
                      " feature values, config expects " + std::to_string(cfg.feature_dim));
    data.features.push_back(r.feature);
    for (const auto& c : r.captions) {
      term_lists.push_back(sentence_terms(text::normalize(c), pipeline, lexicon));
      data.examples.push_back({data.features.size() - 1, {}});
    }
  }
  if (data.examples.empty()) throw DataError("caption records hold no captions");
  VocabOptions vo;
  vo.cap = cfg.term_vocab;
  vo.min_count = cfg.min_count;
  auto vocab = Vocabulary::build(term_lists, vo);
  for (std::size_t i = 0; i < term_lists.size(); ++i) data.examples[i].terms = vocab.encode(term_lists[i]);

  models::TermGenConfig mc;
  mc.feature_dim = cfg.feature_dim;
  mc.embed_dim = cfg.embed_dim;
  mc.hidden_dim = cfg.hidden_dim;
  mc.vocab_size = vocab.size();
  mc.dropout = cfg.dropout;
  TermGenBundle bundle{models::TermGenModel<float>::create(mc, cfg.seed), std::move(vocab)};
  auto r = fit_termgen(bundle.model, data, cfg, on_epoch);
  if (result) *result = std::move(r);
  return bundle;
}

LangGenBundle train_langgen(const std::vector<std::vector<std::string>>& descriptive,
                            const std::vector<std::vector<std::string>>& styled,
                            const termpipe::TermPipeline& pipeline, const termpipe::FrameLexicon& lexicon,
                            const TrainConfig& cfg, TrainResult* result, const EpochCallback& on_epoch) {
  cfg.validate();
  const bool use_desc = cfg.mode != TrainMode::kRomOnly;
  const bool use_sty = cfg.mode != TrainMode::kCocoOnly;
  const auto& none = std::vector<std::vector<std::string>>{};
  const auto& desc = use_desc ? descriptive : none;
  const auto& sty = use_sty ? styled : none;

  std::vector<std::vector<std::string>> desc_terms, sty_terms, all_terms, all_words;
  for (const auto& s : desc) desc_terms.push_back(sentence_terms(s, pipeline, lexicon));
  for (const auto& s : sty) sty_terms.push_back(sentence_terms(s, pipeline, lexicon));
  all_terms = desc_terms;
  all_terms.insert(all_terms.end(), sty_terms.begin(), sty_terms.end());
  all_words = desc;
  all_words.insert(all_words.end(), sty.begin(), sty.end());
  if (all_words.empty()) throw DataError("no sentences to train on");

  VocabOptions vi;
  vi.cap = cfg.input_vocab;
  vi.min_count = cfg.min_count;
  vi.style_tokens = 2;
  VocabOptions vo;
  vo.cap = cfg.output_vocab;
  vo.min_count = cfg.min_count;
  auto input = Vocabulary::build(all_terms, vi);
  auto output = Vocabulary::build(all_words, vo);

  std::vector<Seq2SeqExample> de, se;
  for (std::size_t i = 0; i < desc.size(); ++i)
    de.push_back({encode_terms(input, desc_terms[i], StyleToken::kDescriptive), output.encode(desc[i])});
  for (std::size_t i = 0; i < sty.size(); ++i)
    se.push_back({encode_terms(input, sty_terms[i], StyleToken::kStyled), output.encode(sty[i])});

  models::LangGenConfig mc;
  mc.in_vocab = input.size();
  mc.out_vocab = output.size();
  mc.term_embed_dim = cfg.embed_dim;
  mc.word_embed_dim = cfg.embed_dim;
  mc.encoder_hidden = cfg.hidden_dim;
  mc.dropout = cfg.dropout;
  LangGenBundle bundle{models::LangGenModel<float>::create(mc, cfg.seed), std::move(input), std::move(output)};
  auto r = fit_seq2seq(bundle.model, de, se, cfg, on_epoch);
  if (result) *result = std::move(r);
  return bundle;
}

GruLmBundle train_gru_lm(const std::vector<std::vector<std::string>>& sentences, const TrainConfig& cfg,
                         TrainResult* result, const EpochCallback& on_epoch) {
  cfg.validate();
  if (sentences.empty()) throw DataError("language model training set is empty");
  VocabOptions vo;
  vo.cap = cfg.output_vocab;
  vo.min_count = cfg.min_count;
  auto vocab = Vocabulary::build(sentences, vo);
  std::vector<std::vector<int>> ids;
  for (const auto& s : sentences) ids.push_back(vocab.encode(s));
  models::GruLmConfig mc;
  mc.vocab_size = vocab.size();
  mc.embed_dim = cfg.embed_dim;
  mc.hidden_dim = cfg.hidden_dim;
  mc.dropout = cfg.dropout;
  GruLmBundle bundle{models::GruLm<float>::create(mc, cfg.seed), std::move(vocab)};
  auto r = fit_gru_lm(bundle.model, ids, cfg, on_epoch);
  if (result) *result = std::move(r);
  return bundle;
}

}  // namespace semstyle::trainer
