// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "semstyle/errors.hpp"
#include "semstyle/model_io.hpp"
#include "semstyle/possel.hpp"
#include "semstyle/trainer.hpp"
#include "toy.hpp"

using namespace semstyle;
using namespace semstyle::possel;

namespace {

std::vector<std::vector<std::string>> words_of(const std::vector<PosSentence>& s, std::size_t repeat = 1) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t r = 0; r < repeat; ++r)
    for (const auto& x : s) out.push_back(x.words);
  return out;
}

DenoiseConfig small_denoiser(std::uint64_t seed) {
  DenoiseConfig d;
  d.copies = 12;
  auto& t = d.train;
  t.learning_rate = 0.01;
  t.batch_size = 16;
  t.epochs = 40;
  t.validation_fraction = 0.0;
  t.dropout = 0.0;
  t.embed_dim = 16;
  t.hidden_dim = 24;
  t.seed = seed;
  return d;
}

std::vector<int> no_ranks() { return std::vector<int>(std::size(kAllPos), -1); }

}  // namespace

TEST_CASE("retention budget is exact") {
  CHECK(retained_count(0, 0.33) == 0);
  CHECK(retained_count(1, 0.33) == 1);
  CHECK(retained_count(2, 0.33) == 1);
  CHECK(retained_count(6, 0.33) == 2);
  CHECK(retained_count(10, 0.33) == 3);
  CHECK(retained_count(100, 0.33) == 33);
  CHECK(retained_count(5, 1.0) == 5);

  Rng rng(3);
  auto corpus = toy::noun_key_corpus();
  for (std::size_t trial = 0; trial < 200; ++trial) {
    const auto& s = corpus[trial % corpus.size()];
    auto ranks = no_ranks();
    ranks[static_cast<std::size_t>(Pos::kNoun)] = static_cast<int>(trial % 3);
    ranks[static_cast<std::size_t>(Pos::kDet)] = static_cast<int>(trial % 2 == 0 ? 5 : 0);
    const double budget = 0.1 + 0.9 * static_cast<double>(trial) / 200.0;
    auto kept = kept_positions(s, ranks, budget, rng);
    CHECK(kept.size() == retained_count(s.words.size(), budget));
    CHECK(std::is_sorted(kept.begin(), kept.end()));
  }
}

TEST_CASE("removal follows rank order with unplaced classes in the middle") {
  PosSentence s{{"the", "big", "dog", "runs", "quickly", "."},
                {Pos::kDet, Pos::kAdj, Pos::kNoun, Pos::kVerb, Pos::kAdv, Pos::kPunct}};
  auto ranks = no_ranks();
  ranks[static_cast<std::size_t>(Pos::kDet)] = 0;    // removed first
  ranks[static_cast<std::size_t>(Pos::kNoun)] = 5;   // removed last
  ranks[static_cast<std::size_t>(Pos::kVerb)] = 4;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    auto kept = kept_positions(s, ranks, 0.34, rng);
    CHECK(kept == std::vector<std::size_t>{2, 3});
    kept = kept_positions(s, ranks, 0.5, rng);  // keep 3: noun, verb, one unplaced word
    REQUIRE(kept.size() == 3);
    CHECK(std::find(kept.begin(), kept.end(), 2u) != kept.end());
    CHECK(std::find(kept.begin(), kept.end(), 3u) != kept.end());
    CHECK(std::find(kept.begin(), kept.end(), 0u) == kept.end());
  }
}

TEST_CASE("drop zero reduces to a copy task") {
  auto corpus = toy::make_two_style(12, 0, 4);
  auto sentences = corpus.descriptive;
  auto d = small_denoiser(5);
  d.drop_fraction = 0.0;
  d.copies = 1;
  d.train.batch_size = 4;
  d.train.epochs = 120;
  auto b = train_denoising_lm(sentences, d);
  std::size_t exact = 0;
  for (const auto& s : sentences) {
    auto ids = b.input.encode(s);
    auto out = b.model.generate_ids(ids, 30);
    exact += b.output.decode(out.words) == s;
  }
  CHECK(static_cast<double>(exact) >= 0.95 * static_cast<double>(sentences.size()));
}

TEST_CASE("reconstruction beats an unconditional language model") {
  auto corpus = toy::noun_key_corpus();
  auto d = small_denoiser(2);
  auto b = train_denoising_lm(words_of(corpus), d);
  RankOptions opt;
  opt.draws = 4;
  const double denoise_bits = ranking_bits(b, corpus, no_ranks(), opt);

  auto lm_cfg = d.train;
  lm_cfg.epochs = 150;
  lm_cfg.batch_size = 4;
  auto lm = trainer::train_gru_lm(words_of(corpus), lm_cfg);
  double lm_bits = 0.0;
  std::size_t count = 0;
  for (const auto& s : corpus) {
    for (double v : lm.model.log2_probs(lm.words.encode(s.words))) lm_bits -= v;
    count += s.words.size() + 1;
  }
  lm_bits /= static_cast<double>(count);
  // The unconditional floor is 3 bits for the noun over 7 tokens.
  CHECK(lm_bits > 0.4);
  CHECK(denoise_bits < lm_bits);
}

TEST_CASE("ranking is a reproducible permutation with NOUN most important") {
  auto corpus = toy::noun_key_corpus();
  auto d = small_denoiser(7);
  trainer::TrainResult r1, r2;
  auto b1 = train_denoising_lm(words_of(corpus), d, &r1);
  auto b2 = train_denoising_lm(words_of(corpus), d, &r2);
  CHECK(checkpoint::serialize(to_checkpoint(b1)) == checkpoint::serialize(to_checkpoint(b2)));

  RankOptions opt;
  opt.seed = 7;
  auto rank = rank_word_classes(b1, corpus, opt);
  std::set<Pos> seen(rank.order.begin(), rank.order.end());
  CHECK(seen.size() == rank.order.size());
  CHECK(rank.order.size() == 6);
  CHECK(rank.steps.size() == rank.order.size());
  CHECK(rank.perplexities().size() == rank.steps.size());
  CHECK(rank.order.back() == Pos::kNoun);
  CHECK(rank.warnings.size() == std::size(kAllPos) - 6);

  opt.threads = 3;
  auto again = rank_word_classes(b2, corpus, opt);
  CHECK(again.to_text() == rank.to_text());
}

TEST_CASE("interchangeable classes tie and break alphabetically") {
  auto corpus = toy::symmetric_corpus();
  auto d = small_denoiser(3);
  d.train.epochs = 120;
  auto b = train_denoising_lm(words_of(corpus), d);
  RankOptions opt;
  opt.classes = {Pos::kNoun, Pos::kAdv, Pos::kAdj};
  auto adj_low = no_ranks();
  adj_low[static_cast<std::size_t>(Pos::kNoun)] = 2;
  auto adv_low = adj_low;
  adj_low[static_cast<std::size_t>(Pos::kAdj)] = 0;
  adv_low[static_cast<std::size_t>(Pos::kAdv)] = 0;
  const double a = ranking_bits(b, corpus, adj_low, opt);
  const double v = ranking_bits(b, corpus, adv_low, opt);
  CHECK(std::abs(a - v) < opt.tie_bits);

  auto rank = rank_word_classes(b, corpus, opt);
  REQUIRE(rank.steps.size() == 3);
  CHECK(rank.steps[0].cls == Pos::kNoun);
  CHECK(rank.steps[0].placed_high);
  CHECK(rank.steps[1].cls == Pos::kAdj);
  CHECK_FALSE(rank.steps[1].placed_high);
  CHECK(rank.order == std::vector<Pos>{Pos::kAdj, Pos::kAdv, Pos::kNoun});
}

TEST_CASE("absent classes are skipped with a warning") {
  auto corpus = toy::symmetric_corpus();
  auto d = small_denoiser(3);
  d.train.epochs = 2;
  auto b = train_denoising_lm(words_of(corpus), d);
  RankOptions opt;
  opt.classes = {Pos::kNoun, Pos::kNum};
  auto rank = rank_word_classes(b, corpus, opt);
  REQUIRE(rank.warnings.size() == 1);
  CHECK(rank.warnings[0].find("NUM") != std::string::npos);
  CHECK(rank.order == std::vector<Pos>{Pos::kNoun});
  CHECK(rank.to_text().find("# warning") != std::string::npos);

  opt.classes = {Pos::kNum};
  CHECK_THROWS_AS(rank_word_classes(b, corpus, opt), DataError);
  CHECK_THROWS_AS(rank_word_classes(b, {}, RankOptions{}), DataError);
}

TEST_CASE("run_possel needs enough sentences for its split") {
  const auto& pipeline = termpipe::TermPipeline::shared();
  std::vector<std::vector<std::string>> few = {{"a", "dog", "runs", "."}};
  CHECK_THROWS_AS(run_possel(few, pipeline, small_denoiser(1), {}), DataError);
}
