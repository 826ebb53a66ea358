// SPDX-License-Identifier: Apache-2.0
#include "semstyle/possel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "semstyle/errors.hpp"

namespace semstyle::possel {

namespace {

constexpr std::size_t kClassCount = std::size(kAllPos);

std::size_t index_of(Pos p) { return static_cast<std::size_t>(p); }

}  // namespace

std::vector<PosSentence> tag_corpus(const std::vector<std::vector<std::string>>& sentences,
                                    const termpipe::TermPipeline& pipeline) {
  std::vector<PosSentence> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    PosSentence ps;
    ps.words = s;
    for (const auto& t : pipeline.tag_tokens(s)) ps.classes.push_back(t.pos);
    out.push_back(std::move(ps));
  }
  return out;
}

std::size_t retained_count(std::size_t n, double keep_fraction) {
  if (n == 0) return 0;
  const auto k = static_cast<std::size_t>(std::lround(keep_fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t keep, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  rng.shuffle(std::span<std::size_t>(idx));
  idx.resize(std::min(keep, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

LangGenBundle train_denoising_lm(const std::vector<std::vector<std::string>>& corpus, const DenoiseConfig& config,
                                 trainer::TrainResult* result) {
  if (corpus.empty()) throw DataError("denoiser needs a non-empty corpus");
  if (!(config.drop_fraction >= 0.0 && config.drop_fraction < 1.0))
    throw UsageError("drop fraction must lie in [0, 1)");
  if (config.copies == 0) throw UsageError("denoiser needs at least one corrupted copy per sentence");
  auto cfg = config.train;
  cfg.mode = trainer::TrainMode::kCocoOnly;
  cfg.validate();

  VocabOptions vo;
  vo.cap = cfg.output_vocab;
  vo.min_count = cfg.min_count;
  auto vocab = Vocabulary::build(corpus, vo);

  std::vector<trainer::Seq2SeqExample> examples;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto target = vocab.encode(corpus[i]);
    const std::size_t keep = retained_count(target.size(), 1.0 - config.drop_fraction);
    for (std::size_t c = 0; c < config.copies; ++c) {
      auto rng = Rng::derive(cfg.seed, {0xd1, i, c});
      std::vector<int> input;
      for (auto p : random_subset(target.size(), keep, rng)) input.push_back(target[p]);
      examples.push_back({std::move(input), target});
    }
  }

  models::LangGenConfig mc;
  mc.in_vocab = vocab.size();
  mc.out_vocab = vocab.size();
  mc.term_embed_dim = cfg.embed_dim;
  mc.word_embed_dim = cfg.embed_dim;
  mc.encoder_hidden = cfg.hidden_dim;
  mc.dropout = cfg.dropout;
  LangGenBundle bundle{models::LangGenModel<float>::create(mc, cfg.seed), vocab, vocab};
  auto r = trainer::fit_seq2seq(bundle.model, examples, {}, cfg);
  if (result) *result = std::move(r);
  return bundle;
}

std::vector<std::size_t> kept_positions(const PosSentence& s, const std::vector<int>& rank_of_class, double budget,
                                        Rng& rng) {
  const std::size_t n = s.words.size();
  if (s.classes.size() != n) throw DataError("sentence words and classes differ in length");
  std::size_t to_remove = n - retained_count(n, budget);
  // Unplaced classes share the lowest open rank.
  int pool = 0;
  while (std::find(rank_of_class.begin(), rank_of_class.end(), pool) != rank_of_class.end()) ++pool;
  std::vector<int> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = index_of(s.classes[i]);
    key[i] = c < rank_of_class.size() && rank_of_class[c] >= 0 ? rank_of_class[c] : pool;
  }
  std::vector<int> keys(key.begin(), key.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<bool> removed(n, false);
  for (int k : keys) {
    if (to_remove == 0) break;
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < n; ++i)
      if (key[i] == k) group.push_back(i);
    if (group.size() <= to_remove) {
      for (auto i : group) removed[i] = true;
      to_remove -= group.size();
    } else {
      for (auto g : random_subset(group.size(), to_remove, rng)) removed[group[g]] = true;
      to_remove = 0;
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i]) kept.push_back(i);
  return kept;
}

double ranking_bits(const LangGenBundle& model, const std::vector<PosSentence>& heldout,
                    const std::vector<int>& rank_of_class, const RankOptions& options) {
  if (heldout.empty()) throw DataError("ranking needs held-out sentences");
  double nats = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < heldout.size(); ++i) {
    const auto target = model.output.encode(heldout[i].words);
    const auto source = model.input.encode(heldout[i].words);
    for (std::size_t d = 0; d < options.draws; ++d) {
      auto rng = Rng::derive(options.seed, {0x9a, i, d});
      std::vector<int> input;
      for (auto p : kept_positions(heldout[i], rank_of_class, options.budget, rng)) input.push_back(source[p]);
      nats += model.model.loss_ids(input, target) * static_cast<double>(target.size() + 1);
      count += target.size() + 1;
    }
  }
  return nats / static_cast<double>(count) / std::log(2.0);
}

std::vector<double> PosRanking::perplexities() const {
  std::vector<double> out;
  for (const auto& s : steps) out.push_back(s.bits);
  return out;
}

std::string PosRanking::to_text() const {
  std::ostringstream out;
  out << "# step\tclass\trank\tplacement\tbits\n";
  char buf[64];
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", steps[i].bits);
    out << i + 1 << '\t' << pos_name(steps[i].cls) << '\t' << steps[i].rank << '\t'
        << (steps[i].placed_high ? "high" : "low") << '\t' << buf << '\n';
  }
  out << "ranking";
  for (auto p : order) out << '\t' << pos_name(p);
  out << '\n';
  for (const auto& w : warnings) out << "# warning: " << w << '\n';
  return out.str();
}

PosRanking rank_word_classes(const LangGenBundle& model, const std::vector<PosSentence>& heldout,
                             const RankOptions& options) {
  if (heldout.empty()) throw DataError("ranking needs held-out sentences");
  if (!(options.budget > 0.0 && options.budget <= 1.0)) throw UsageError("budget must lie in (0, 1]");
  if (options.draws == 0 || options.threads == 0) throw UsageError("draws and threads must be positive");
  PosRanking ranking;
  std::vector<bool> present(kClassCount, false);
  for (const auto& s : heldout)
    for (auto c : s.classes) present[index_of(c)] = true;
  std::vector<Pos> classes;
  for (auto c : options.classes) {
    if (std::find(classes.begin(), classes.end(), c) != classes.end()) continue;
    if (present[index_of(c)]) {
      classes.push_back(c);
    } else {
      ranking.warnings.push_back("class " + std::string(pos_name(c)) + " does not occur in the corpus; skipped");
    }
  }
  std::sort(classes.begin(), classes.end(), [](Pos a, Pos b) { return pos_name(a) < pos_name(b); });
  if (classes.empty()) throw DataError("no word class to rank");

  std::vector<int> rank_of(kClassCount, -1);
  int low = 0, high = static_cast<int>(classes.size()) - 1;
  std::vector<Pos> unplaced = classes;
  while (!unplaced.empty()) {
    struct Candidate {
      Pos cls;
      bool high;
      double bits = 0.0;
    };
    std::vector<Candidate> cands;
    for (auto c : unplaced) {  // alphabetical; low before high
      cands.push_back({c, false});
      if (high != low) cands.push_back({c, true});
    }
    auto evaluate = [&](std::size_t i) {
      auto ranks = rank_of;
      ranks[index_of(cands[i].cls)] = cands[i].high ? high : low;
      cands[i].bits = ranking_bits(model, heldout, ranks, options);
    };
    const std::size_t workers = std::min(options.threads, cands.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < cands.size(); ++i) evaluate(i);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < cands.size(); i += workers) evaluate(i);
        });
      for (auto& t : pool) t.join();
    }
    double best = cands[0].bits;
    for (const auto& c : cands) best = std::min(best, c.bits);
    const auto& pick = *std::find_if(cands.begin(), cands.end(),
                                     [&](const Candidate& c) { return c.bits < best + options.tie_bits; });
    const int rank = pick.high ? high : low;
    rank_of[index_of(pick.cls)] = rank;
    ranking.steps.push_back({pick.cls, static_cast<std::size_t>(rank), pick.high, pick.bits});
    if (pick.high) --high;
    else ++low;
    unplaced.erase(std::find(unplaced.begin(), unplaced.end(), pick.cls));
  }
  ranking.order.resize(classes.size());
  for (auto c : classes) ranking.order[static_cast<std::size_t>(rank_of[index_of(c)])] = c;
  return ranking;
}

PosselResult run_possel(const std::vector<std::vector<std::string>>& corpus, const termpipe::TermPipeline& pipeline,
                        const DenoiseConfig& denoise, const RankOptions& rank) {
  auto tagged = tag_corpus(corpus, pipeline);
  std::vector<std::size_t> idx(tagged.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto rng = Rng::derive(rank.seed, {0x901});
  rng.shuffle(std::span<std::size_t>(idx));
  const std::size_t n_held = tagged.size() / 10;
  if (n_held == 0) throw DataError("possel needs at least 10 sentences for its 90/10 split");
  std::vector<std::size_t> held(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_held));
  std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_held), idx.end());
  std::sort(held.begin(), held.end());
  std::sort(train.begin(), train.end());
  std::vector<std::vector<std::string>> train_words;
  for (auto i : train) train_words.push_back(corpus[i]);
  std::vector<PosSentence> heldout;
  for (auto i : held) heldout.push_back(tagged[i]);

  PosselResult result;
  auto model = train_denoising_lm(train_words, denoise, &result.training);
  result.ranking = rank_word_classes(model, heldout, rank);
  return result;
}

}  // namespace semstyle::possel
