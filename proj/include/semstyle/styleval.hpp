// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "semstyle/model_io.hpp"
#include "semstyle/termpipe.hpp"

namespace semstyle::styleval {

using Sentences = std::vector<std::vector<std::string>>;

// Anything that assigns log2 p(token | history) to each token of a
// sentence, plus one final entry for the end-of-sentence event when the
// scorer models it.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;
  virtual std::vector<double> log2_probs(const std::vector<std::string>& tokens) const = 0;
};

// -(1/N) sum log2 p over every scored token. DataError on an empty set.
double bits_per_word(const SequenceScorer& scorer, const Sentences& sentences);

class UniformScorer : public SequenceScorer {
 public:
  explicit UniformScorer(std::size_t vocab_size) : size_(vocab_size) {}
  std::vector<double> log2_probs(const std::vector<std::string>& tokens) const override;

 private:
  std::size_t size_;
};

class GruLmScorer : public SequenceScorer {
 public:
  explicit GruLmScorer(const GruLmBundle& lm) : lm_(lm) {}
  std::vector<double> log2_probs(const std::vector<std::string>& tokens) const override;

 private:
  const GruLmBundle& lm_;
};

// ---------------------------------------------------------------- n-gram LM

enum class Smoothing { kKneserNey, kMle };

struct NgramOptions {
  std::size_t order = 4;
  Smoothing smoothing = Smoothing::kKneserNey;
  double discount = 0.75;
  // Pad with order-1 <s> and score a final </s>.
  bool sentence_boundaries = true;
  // Training tokens seen at most this often become <unk>.
  std::size_t unk_threshold = 1;
};

// Interpolated Kneser-Ney with one fixed discount for every order. The
// highest order uses raw counts, lower orders use continuation counts, and
// the unigram level interpolates with a uniform distribution over the
// predictable vocabulary. Kmle is the unsmoothed estimate with plain
// back-off to shorter contexts when a context is unseen.
class NgramLm : public SequenceScorer {
 public:
  static NgramLm train(const Sentences& corpus, const NgramOptions& options = {});

  // p(word | context); only the last order-1 context tokens are used and
  // unknown tokens are read as <unk>.
  double prob(const std::vector<std::string>& context, std::string_view word) const;
  std::vector<double> log2_probs(const std::vector<std::string>& tokens) const override;

  // Tokens that can be predicted: the training vocabulary, <unk>, and </s>
  // when sentence boundaries are on.
  std::vector<std::string> predictable() const;
  const NgramOptions& options() const { return options_; }

  nlohmann::ordered_json to_json() const;
  static NgramLm from_json(const nlohmann::ordered_json& j);
  void save(const std::string& path) const;
  static NgramLm load(const std::string& path);

 private:
  struct Level {
    std::unordered_map<std::string, double> counts;        // n-gram key -> count
    std::unordered_map<std::string, double> context_total;  // sum over continuations
    std::unordered_map<std::string, double> context_types;  // distinct continuations
  };

  int id_of(std::string_view token) const;
  double prob_ids(const std::vector<int>& context, int word) const;
  double level_prob(std::size_t k, const std::vector<int>& context, int word) const;
  void finalize();

  NgramOptions options_;
  std::vector<std::string> tokens_;  // id -> token
  std::unordered_map<std::string, int> ids_;
  std::vector<Level> levels_;  // levels_[k-1] holds k-grams
  std::size_t predictable_ = 0;
};

// -------------------------------------------------------------- classifier

struct ClfOptions {
  double l2 = 1.0;
  double tolerance = 1e-6;  // gradient L2 norm at convergence
  std::size_t max_iterations = 1000;
  std::size_t unk_threshold = 1;
};

// Binary presence features: unigrams, then bigrams joined by '§'.
// Duplicates are dropped; first-occurrence order is kept.
std::vector<std::string> clf_features(const std::vector<std::string>& tokens);

class ClfModel {
 public:
  // Styled sentences are the positive class. Minimizes the summed log loss
  // plus l2/2 |w|^2 (bias unpenalized) with L-BFGS.
  static ClfModel train(const Sentences& styled, const Sentences& descriptive, const ClfOptions& options = {});

  double probability(const std::vector<std::string>& tokens) const;
  bool is_styled(const std::vector<std::string>& tokens) const { return probability(tokens) >= 0.5; }

  std::size_t feature_count() const { return weights_.size(); }
  double bias() const { return bias_; }
  double weight(const std::string& feature) const;
  bool converged() const { return converged_; }
  double gradient_norm() const { return gradient_norm_; }

  nlohmann::ordered_json to_json() const;
  static ClfModel from_json(const nlohmann::ordered_json& j);
  void save(const std::string& path) const;
  static ClfModel load(const std::string& path);

 private:
  std::vector<std::string> map_unknown(const std::vector<std::string>& tokens) const;

  std::unordered_set<std::string> known_;
  std::unordered_map<std::string, double> weights_;
  double bias_ = 0.0;
  bool converged_ = false;
  double gradient_norm_ = 0.0;
};

// Share of sentences classified as styled. DataError on an empty set.
double clf_fraction(const ClfModel& model, const Sentences& sentences);

// Seeded k-fold cross-validated accuracy over both classes.
double cross_validate(const Sentences& styled, const Sentences& descriptive, std::size_t folds, std::uint64_t seed,
                      const ClfOptions& options = {});

// -------------------------------------------------------------------- BM25

enum class IdfVariant {
  kLucene,     // ln(1 + (N - n + 0.5) / (n + 0.5)), always positive
  kRobertson,  // max(0, ln((N - n + 0.5) / (n + 0.5)))
};

struct Bm25Options {
  double k1 = 1.2;
  double b = 0.75;
  IdfVariant idf = IdfVariant::kLucene;
};

struct Bm25Hit {
  std::size_t doc = 0;
  double score = 0.0;
};

class Bm25Index {
 public:
  // Lowercase word tokens without punctuation, Porter-stemmed.
  static std::vector<std::string> analyze(std::string_view text);

  static Bm25Index build(std::vector<std::string> documents, const Bm25Options& options = {});

  double idf(const std::string& term) const;  // term already analyzed
  double score(const std::vector<std::string>& query_words, std::size_t doc) const;
  // OR query; documents matching no query term are left out. Ties go to the
  // lower document id. DataError on an empty index.
  std::vector<Bm25Hit> search(const std::vector<std::string>& query_words, std::size_t n) const;

  std::size_t size() const { return docs_.size(); }
  const std::string& document(std::size_t i) const { return docs_.at(i); }
  double average_length() const { return avg_len_; }
  const Bm25Options& options() const { return options_; }

  // A directory holding documents.txt and options.json.
  void save(const std::string& dir) const;
  static Bm25Index load(const std::string& dir);

 private:
  struct Posting {
    std::size_t doc;
    std::size_t tf;
  };

  std::vector<std::string> analyzed_query(const std::vector<std::string>& words) const;

  Bm25Options options_;
  std::vector<std::string> docs_;
  std::vector<std::size_t> lengths_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  double avg_len_ = 0.0;
};

// ------------------------------------------------------- term-space metrics

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// precision: corpus-level clipped unigram precision (BLEU-1 without the
// brevity penalty), counts clipped by the maximum over references.
// recall: per-candidate ROUGE-1 recall, best reference, averaged over
// candidates. DataError on an empty or misaligned set.
PrecisionRecall term_precision_recall(const Sentences& candidates, const std::vector<Sentences>& references);

struct Coverage {
  std::size_t word_terms = 0;
  std::size_t word_covered = 0;
  std::size_t frame_terms = 0;
  std::size_t frame_covered = 0;

  std::optional<double> word_fraction() const;
  std::optional<double> frame_fraction() const;
  Coverage& operator+=(const Coverage& o);
};

// Re-maps the generated sentence to terms. A word-term counts when its
// lemma and POS reappear; a frame-term counts when some generated frame is
// that frame or one of its descendants.
Coverage term_coverage(const std::vector<std::string>& input_terms, const std::vector<std::string>& generated,
                       const termpipe::TermPipeline& pipeline, const termpipe::FrameLexicon& lexicon);

struct StyleAttributes {
  std::size_t sentences = 0;
  double present = 0.0;       // fraction with VBG, VBP or VBZ
  double past = 0.0;          // fraction with VBD or VBN
  double first_person = 0.0;  // fraction with a first-person pronoun
  std::size_t unique_verbs = 0;
};

StyleAttributes style_attributes(const Sentences& sentences, const termpipe::TermPipeline& pipeline);

// ------------------------------------------------------------------ report

struct EvalReport {
  std::size_t sentences = 0;
  std::optional<double> lm_bits;
  std::optional<double> grulm_bits;
  std::optional<double> clf_fraction;
  std::optional<double> term_precision;
  std::optional<double> term_recall;
  std::optional<double> coverage_word_terms;
  std::optional<double> coverage_frame_terms;
  std::optional<StyleAttributes> attributes;

  // Throws NumericError when a fraction leaves [0, 1] or bits are negative.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

}  // namespace semstyle::styleval
