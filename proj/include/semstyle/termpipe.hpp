// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "semstyle/tagger.hpp"

namespace semstyle::termpipe {

struct Token {
  std::string surface;
  std::string lemma;
  std::string tag;  // Penn tag; "NN" for merged collocations
  Pos pos = Pos::kOther;
  std::size_t position = 0;  // index in the tokenized sentence
};

// Inflection table lookup with suffix rules for unseen forms.
class Lemmatizer {
 public:
  Lemmatizer() = default;
  // Rows are "form<TAB>tag-or-class<TAB>lemma", where the middle column is a
  // Penn verb tag (VB, VBD, ...) or a coarse class (NOUN, VERB).
  static Lemmatizer load(const std::string& forms_path);

  void add(const std::string& form, const std::string& key, const std::string& lemma);
  // Adds a lemma to the known set consulted by the suffix rules.
  void add_known(Pos pos, const std::string& lemma);

  std::string lemmatize(const std::string& word, std::string_view penn_tag) const;

 private:
  std::string noun_rules(const std::string& w) const;
  std::string verb_rules(const std::string& w, std::string_view tag) const;
  bool known(Pos pos, const std::string& w) const;

  std::unordered_map<std::string, std::string> table_;  // key: form + '\t' + key
  std::unordered_set<std::string> known_nouns_;
  std::unordered_set<std::string> known_verbs_;
};

class FrameLexicon {
 public:
  enum class Status { kFrame, kFiltered, kUnknownLemma };
  struct Lookup {
    Status status = Status::kUnknownLemma;
    std::string frame;  // set when status == kFrame
  };

  // Throws DataError on malformed input or a cyclic hierarchy.
  static FrameLexicon load(const std::string& path);
  static FrameLexicon parse(std::string_view content, const std::string& origin = "<memory>");

  bool in_vocabulary(const std::string& frame) const;
  Lookup lookup(const std::string& lemma) const;
  std::optional<std::string> parent(const std::string& frame) const;
  // The frame itself followed by its ancestors.
  std::vector<std::string> lineage(const std::string& frame) const;

  int threshold() const { return threshold_; }
  const std::map<std::string, std::string>& lemma_to_frame() const { return lemma_frame_; }
  std::set<std::string> vocabulary() const;

 private:
  void validate(const std::string& origin) const;

  std::map<std::string, std::string> lemma_frame_;
  std::map<std::string, std::string> parent_;
  std::map<std::string, long> counts_;
  int threshold_ = 200;
};

// Bundled frames.lex from the data directory, loaded once.
const FrameLexicon& default_lexicon();

using Phrase = std::vector<std::string>;
std::vector<Phrase> load_collocations(const std::string& path);

enum class TermMode { kFrames, kLempos, kWords };
TermMode parse_term_mode(std::string_view name);

struct WordTerm {
  std::string lemma;
  Pos pos = Pos::kNoun;
  bool surface_only = false;  // rendered without a POS suffix (words mode)
  auto operator<=>(const WordTerm&) const = default;
};

struct FrameTerm {
  std::string frame;
  auto operator<=>(const FrameTerm&) const = default;
};

struct SemanticTerm {
  std::variant<WordTerm, FrameTerm> value;
  std::size_t position = 0;  // source token index
  bool operator==(const SemanticTerm& o) const { return value == o.value; }

  bool is_frame() const { return std::holds_alternative<FrameTerm>(value); }
  std::string render() const;
};

// Inverse of render(): "x_FRAME" gives a FrameTerm, "lemma_POS" a WordTerm,
// anything else a surface-only WordTerm.
SemanticTerm parse_term(std::string_view rendered);

struct TermSequence {
  std::vector<SemanticTerm> terms;
  std::size_t source_len = 0;  // words in the source sentence, punctuation excluded

  std::vector<std::string> rendered() const;
  std::string str() const;  // space-joined rendering
};

struct TermConfig {
  TermMode mode = TermMode::kFrames;
  std::set<Pos> filtered_pos = {Pos::kPunct, Pos::kAdv, Pos::kAdj, Pos::kPron, Pos::kConj,
                                Pos::kDet,   Pos::kAdp, Pos::kPart, Pos::kNum};
  bool filter_stopwords = true;
};

// Longest match first, left to right, comparing each phrase word against
// the token surface or lemma. Merged tokens are nouns.
std::vector<Token> merge_collocations(const std::vector<Token>& tokens, const std::vector<Phrase>& collocations);

FrameLexicon::Lookup map_verb_to_frame(const std::string& lemma, const FrameLexicon& lex);

class TermPipeline {
 public:
  TermPipeline(PosTagger tagger, Lemmatizer lemmatizer, std::vector<Phrase> collocations,
               std::unordered_set<std::string> stopwords);

  // Loads tagger.model, lemma_forms.txt, collocations.txt and the stopword
  // lists from the data directory. The lexicon's verb lemmas join the known set.
  static TermPipeline load_default(const FrameLexicon* lex = nullptr);
  static const TermPipeline& shared();

  std::vector<Token> preprocess_sentence(std::string_view text) const;
  std::vector<Token> tag_tokens(const std::vector<std::string>& tokens) const;
  TermSequence extract_terms(std::string_view text, const FrameLexicon& lex, const TermConfig& cfg = {}) const;

  bool is_stopword(const Token& t) const;
  const std::vector<Phrase>& collocations() const { return collocations_; }

 private:
  PosTagger tagger_;
  Lemmatizer lemmatizer_;
  std::vector<Phrase> collocations_;
  std::unordered_set<std::string> stopwords_;
};

}  // namespace semstyle::termpipe
