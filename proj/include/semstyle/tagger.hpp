// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semstyle {

// Coarse part-of-speech classes.
enum class Pos { kNoun, kVerb, kAdj, kAdv, kPron, kDet, kAdp, kConj, kPart, kNum, kPunct, kOther };

inline constexpr Pos kAllPos[] = {Pos::kNoun, Pos::kVerb, Pos::kAdj,  Pos::kAdv,  Pos::kPron,  Pos::kDet,
                                  Pos::kAdp,  Pos::kConj, Pos::kPart, Pos::kNum,  Pos::kPunct, Pos::kOther};

std::string_view pos_name(Pos p);  // "NOUN", "VERB", ...
Pos parse_pos(std::string_view name);

// Penn Treebank tag to coarse class:
//   NN NNS NNP NNPS                -> NOUN
//   VB VBD VBG VBN VBP VBZ MD      -> VERB
//   JJ JJR JJS                     -> ADJ
//   RB RBR RBS WRB                 -> ADV
//   PRP PRP$ WP WP$ EX             -> PRON
//   DT PDT WDT                     -> DET
//   IN                             -> ADP
//   CC                             -> CONJ
//   RP TO POS                      -> PART
//   CD                             -> NUM
//   . , : `` '' -LRB- -RRB- HYPH   -> PUNCT
//   anything else (UH FW SYM LS)   -> OTHER
Pos coarse_pos(std::string_view penn_tag);

struct TaggedSentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
};

// Reads "word/TAG word/TAG ..." lines (the tag follows the last '/').
std::vector<TaggedSentence> load_tagged_corpus(const std::string& path);

// Greedy left-to-right averaged-perceptron tagger over lowercase tokens,
// emitting Penn Treebank tags. Frequent unambiguous words are resolved by
// a tag dictionary before the perceptron is consulted.
class PosTagger {
 public:
  struct TrainOptions {
    int iterations = 8;
    std::uint64_t seed = 7;
    int dict_min_count = 20;
    double dict_min_ratio = 0.97;
  };

  static PosTagger train(const std::vector<TaggedSentence>& corpus, const TrainOptions& options);
  static PosTagger train(const std::vector<TaggedSentence>& corpus) { return train(corpus, TrainOptions{}); }
  static PosTagger load(const std::string& path);
  void save(const std::string& path) const;

  std::vector<std::string> tag(const std::vector<std::string>& words) const;

  const std::vector<std::string>& classes() const { return classes_; }

 private:
  using Weights = std::unordered_map<std::string, std::unordered_map<std::string, double>>;

  std::string predict(const std::vector<std::string>& features) const;

  Weights weights_;
  std::unordered_map<std::string, std::string> tagdict_;
  std::vector<std::string> classes_;  // sorted; ties resolve to the first
};

}  // namespace semstyle
