// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "semstyle/model_io.hpp"
#include "semstyle/tagger.hpp"
#include "semstyle/termpipe.hpp"
#include "semstyle/trainer.hpp"

namespace semstyle::possel {

struct PosSentence {
  std::vector<std::string> words;
  std::vector<Pos> classes;  // coarse class per word
};

std::vector<PosSentence> tag_corpus(const std::vector<std::vector<std::string>>& sentences,
                                    const termpipe::TermPipeline& pipeline);

// max(1, round(fraction * n)) for n > 0; 0 for an empty sentence.
std::size_t retained_count(std::size_t n, double keep_fraction);

// Positions of a uniformly random subset of size `keep`, ascending.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t keep, Rng& rng);

struct DenoiseConfig {
  double drop_fraction = 0.66;
  std::size_t copies = 4;  // independently corrupted inputs per sentence
  trainer::TrainConfig train;
};

// Sequence-to-sequence model that rebuilds a sentence from a random,
// order-preserving subset of its words. Input and output vocabularies hold
// the same words; the encoder input carries no style token.
LangGenBundle train_denoising_lm(const std::vector<std::vector<std::string>>& corpus, const DenoiseConfig& config,
                                 trainer::TrainResult* result = nullptr);

// One greedy decision: `cls` took rank `rank` (0 is least important).
struct Step {
  Pos cls = Pos::kOther;
  std::size_t rank = 0;
  bool placed_high = false;
  double bits = 0.0;  // held-out bits per word with the chosen placement
};

struct PosRanking {
  std::vector<Pos> order;  // least to most important
  std::vector<Step> steps;
  std::vector<std::string> warnings;

  std::vector<double> perplexities() const;
  std::string to_text() const;  // ranking file contents
};

struct RankOptions {
  double budget = 0.33;     // fraction of words kept
  double tie_bits = 0.01;   // smaller differences are ties, broken alphabetically
  std::size_t draws = 2;    // random removal draws per held-out sentence
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::vector<Pos> classes = std::vector<Pos>(std::begin(kAllPos), std::end(kAllPos));
};

// Rank layout during the search: classes placed low are removed first, in
// rank order; unplaced classes share one middle rank; classes placed high
// are removed last. Removal stops at the budget, with a random subset
// taken from the boundary group.
std::vector<std::size_t> kept_positions(const PosSentence& s, const std::vector<int>& rank_of_class, double budget,
                                        Rng& rng);

// Held-out bits per word of the denoiser given inputs reduced under a
// (partial) ranking. rank_of_class is indexed by Pos, -1 for unplaced.
double ranking_bits(const LangGenBundle& model, const std::vector<PosSentence>& heldout,
                    const std::vector<int>& rank_of_class, const RankOptions& options);

// Greedy forward selection: each step tries every unplaced class at the
// lowest and the highest open rank and keeps the placement with the lowest
// held-out bits. Classes absent from `heldout` are skipped with a warning.
PosRanking rank_word_classes(const LangGenBundle& model, const std::vector<PosSentence>& heldout,
                             const RankOptions& options = {});

struct PosselResult {
  PosRanking ranking;
  trainer::TrainResult training;
};

// Tags the corpus, splits it 90/10 with the seed, trains the denoiser on the
// larger part and ranks on the smaller.
PosselResult run_possel(const std::vector<std::vector<std::string>>& corpus, const termpipe::TermPipeline& pipeline,
                        const DenoiseConfig& denoise, const RankOptions& rank);

}  // namespace semstyle::possel
