// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"
#include "semstyle/styleval.hpp"
#include "semstyle/text.hpp"
#include "oracle_values.hpp"
#include "toy.hpp"

using namespace semstyle;
using namespace semstyle::styleval;

namespace {

Sentences split_all(const std::vector<std::string>& lines) {
  Sentences out;
  for (const auto& l : lines) {
    std::vector<std::string> toks;
    std::size_t start = 0;
    while (start < l.size()) {
      auto end = l.find(' ', start);
      if (end == std::string::npos) end = l.size();
      if (end > start) toks.push_back(l.substr(start, end - start));
      start = end + 1;
    }
    out.push_back(toks);
  }
  return out;
}

const Sentences kFixture = split_all(oracle::kNgramFixture);
const auto& kQueries = oracle::kNgramQueries;
const auto& kKn3 = oracle::kKn3;
const auto& kKn4 = oracle::kKn4;
const auto& kKn3All = oracle::kKn3All;
const auto& kMle2 = oracle::kMle2;

void check_queries(const NgramLm& lm, const std::vector<double>& expected) {
  for (std::size_t i = 0; i < kQueries.size(); ++i) {
    INFO("query " << i);
    CHECK(std::abs(lm.prob(kQueries[i].context, kQueries[i].word) - expected[i]) < 1e-9);
  }
}

}  // namespace

TEST_CASE("n-gram probabilities match the brute-force oracle") {
  NgramOptions o;
  o.order = 3;
  check_queries(NgramLm::train(kFixture, o), kKn3);
  o.order = 4;
  check_queries(NgramLm::train(kFixture, o), kKn4);
  o.order = 3;
  o.unk_threshold = 0;
  check_queries(NgramLm::train(kFixture, o), kKn3All);
  o.order = 2;
  o.smoothing = Smoothing::kMle;
  check_queries(NgramLm::train(kFixture, o), kMle2);

  const auto tests = split_all(oracle::kNgramTest);
  NgramOptions k3;
  k3.order = 3;
  CHECK(std::abs(bits_per_word(NgramLm::train(kFixture, k3), tests) - oracle::kBitsKn3) < 1e-9);
  NgramOptions k4;
  CHECK(std::abs(bits_per_word(NgramLm::train(kFixture, k4), tests) - oracle::kBitsKn4) < 1e-9);
  k3.unk_threshold = 0;
  CHECK(std::abs(bits_per_word(NgramLm::train(kFixture, k3), tests) - oracle::kBitsKn3All) < 1e-9);
}

TEST_CASE("unigram MLE on 'a a a b'") {
  NgramOptions o;
  o.order = 1;
  o.smoothing = Smoothing::kMle;
  o.sentence_boundaries = false;
  auto lm = NgramLm::train(split_all({"a a a b"}), o);
  CHECK(lm.prob({}, "a") == doctest::Approx(oracle::kUnigramA).epsilon(1e-12));
  CHECK(std::abs(bits_per_word(lm, split_all({"a a"})) - oracle::kUnigramBits) < 1e-9);
  // Same value through the smoothed path: D * types / total * uniform restores the mass exactly.
  o.smoothing = Smoothing::kKneserNey;
  CHECK(std::abs(NgramLm::train(split_all({"a a a b"}), o).prob({}, "a") - 0.75) < 1e-12);
}

TEST_CASE("n-gram conditionals normalize and stay in (0, 1]") {
  Rng rng(8);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f", "g"};
  for (std::size_t order = 1; order <= 5; ++order) {
    Sentences corpus;
    for (int i = 0; i < 30; ++i) {
      std::vector<std::string> s;
      for (std::size_t k = 0; k < 1 + rng.below(8); ++k) s.push_back(words[rng.below(words.size())]);
      corpus.push_back(s);
    }
    for (bool boundaries : {true, false}) {
      NgramOptions o;
      o.order = order;
      o.sentence_boundaries = boundaries;
      auto lm = NgramLm::train(corpus, o);
      const auto vocab = lm.predictable();
      for (int q = 0; q < 100; ++q) {
        std::vector<std::string> ctx;
        for (std::size_t k = 0; k < rng.below(order + 1); ++k)
          ctx.push_back(rng.below(5) == 0 ? "<s>" : (rng.below(10) == 0 ? "zzz" : words[rng.below(words.size())]));
        double sum = 0.0;
        for (const auto& w : vocab) {
          const double p = lm.prob(ctx, w);
          CHECK(p > 0.0);
          CHECK(p <= 1.0);
          sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("adding a sentence does not raise its own bits") {
  Rng rng(21);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e"};
  auto random_sentence = [&] {
    std::vector<std::string> s;
    for (std::size_t k = 0; k < 2 + rng.below(6); ++k) s.push_back(words[rng.below(words.size())]);
    return s;
  };
  for (int trial = 0; trial < 40; ++trial) {
    Sentences corpus;
    for (int i = 0; i < 12; ++i) corpus.push_back(random_sentence());
    auto s = random_sentence();
    NgramOptions o;
    o.unk_threshold = 0;
    o.order = 1 + trial % 4;
    // Closed vocabulary: every token of s already occurs in the corpus.
    corpus.push_back(s);
    const double before = bits_per_word(NgramLm::train(corpus, o), {s});
    corpus.push_back(s);
    const double after = bits_per_word(NgramLm::train(corpus, o), {s});
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("in-style text scores lower than cross-style text") {
  auto c = toy::make_two_style(200, 50, 3);
  NgramOptions o;
  Sentences desc_train(c.descriptive.begin(), c.descriptive.begin() + 150);
  Sentences desc_test(c.descriptive.begin() + 150, c.descriptive.end());
  Sentences sty_train(c.styled.begin(), c.styled.begin() + 150);
  Sentences sty_test(c.styled.begin() + 150, c.styled.end());
  auto lm_d = NgramLm::train(desc_train, o);
  auto lm_s = NgramLm::train(sty_train, o);
  CHECK(bits_per_word(lm_s, sty_test) + 1.0 < bits_per_word(lm_s, desc_test));
  CHECK(bits_per_word(lm_d, desc_test) + 1.0 < bits_per_word(lm_d, sty_test));
  CHECK(bits_per_word(lm_s, sty_test) + 1.0 < bits_per_word(lm_d, sty_test));
}

TEST_CASE("uniform and deterministic scorers") {
  for (std::size_t v : {2u, 3u, 7u, 10u, 1000u, 20000u}) {
    for (std::size_t n = 1; n < 25; ++n) {
      Sentences s(n % 4 + 1, std::vector<std::string>(n, "w"));
      CHECK(bits_per_word(UniformScorer(v), s) == std::log2(static_cast<double>(v)));
    }
  }
  NgramOptions o;
  o.order = 3;
  o.smoothing = Smoothing::kMle;
  o.unk_threshold = 0;
  auto one = split_all({"x y z w"});
  CHECK(bits_per_word(NgramLm::train(one, o), one) == 0.0);
  CHECK_THROWS_AS(bits_per_word(UniformScorer(4), {}), DataError);
  CHECK_THROWS_AS(NgramLm::train({}, o), DataError);
}

TEST_CASE("n-gram model save and load") {
  auto lm = NgramLm::train(kFixture, {});
  const auto path = (std::filesystem::temp_directory_path() / "semstyle_ngram.json").string();
  lm.save(path);
  auto back = NgramLm::load(path);
  for (const auto& q : kQueries) CHECK(back.prob(q.context, q.word) == lm.prob(q.context, q.word));
  CHECK(back.to_json() == lm.to_json());
}

TEST_CASE("classifier features") {
  auto f = clf_features({"the", "cat"});
  CHECK(f == std::vector<std::string>{"the", "cat", "the\xC2\xA7" "cat"});
  CHECK(clf_features({"a", "a", "a"}) == std::vector<std::string>{"a", "a\xC2\xA7" "a"});
  CHECK(clf_features({}).empty());
}

TEST_CASE("classifier separates the two toy styles") {
  auto c = toy::make_two_style(300, 0, 5);
  const double acc = cross_validate(c.styled, c.descriptive, 5, 1);
  CHECK(acc >= 0.95);
  auto m = ClfModel::train(c.styled, c.descriptive);
  CHECK(m.converged());
  CHECK(m.gradient_norm() < 1e-6);
  auto fresh = toy::make_two_style(100, 0, 99);
  CHECK(clf_fraction(m, fresh.descriptive) <= 0.05);
  CHECK(clf_fraction(m, fresh.styled) >= 0.95);
  const double mixed = clf_fraction(m, {fresh.styled[0], fresh.descriptive[0]});
  CHECK(mixed == 0.5);

  const auto path = (std::filesystem::temp_directory_path() / "semstyle_clf.json").string();
  m.save(path);
  auto back = ClfModel::load(path);
  for (const auto& s : fresh.styled) CHECK(back.probability(s) == m.probability(s));

  CHECK_THROWS_AS(ClfModel::train(c.styled, {}), DataError);
  CHECK_THROWS_AS(clf_fraction(m, {}), DataError);
}

TEST_CASE("classifier optimum satisfies the stationarity condition") {
  // Two sentences, one per class, sharing no tokens: each feature weight w
  // solves w = sigma(-(w_sum + b)) on its side, and the bias balances.
  Sentences s = {{"x", "y"}, {"x", "y"}};
  Sentences d = {{"u", "v"}, {"u", "v"}};
  auto m = ClfModel::train(s, d);
  const double wx = m.weight("x"), wu = m.weight("u");
  CHECK(wx > 0);
  CHECK(wu < 0);
  CHECK(std::abs(wx + wu) < 1e-6);  // symmetric problem
  CHECK(std::abs(m.bias()) < 1e-6);
  CHECK(m.probability({"x", "y"}) > 0.5);
  CHECK(m.probability({"q"}) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("BM25 matches the textbook formula") {
  const auto& docs = oracle::kBm25Docs;
  const auto& queries = oracle::kBm25Queries;
  const auto& lucene = oracle::kBm25Lucene;
  auto idx = Bm25Index::build(docs);
  for (std::size_t q = 0; q < queries.size(); ++q)
    for (std::size_t d = 0; d < docs.size(); ++d) CHECK(std::abs(idx.score(queries[q], d) - lucene[q][d]) < 1e-9);
  auto hits = idx.search({"big", "cat"}, 3);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].doc == 2);
  CHECK(hits[1].doc == 1);
  CHECK(hits[2].doc == 0);
  CHECK(std::abs(hits[0].score - lucene[2][2]) < 1e-9);
  CHECK(idx.search({"zebra"}, 5).empty());
  CHECK(idx.search({"dog", "mat"}, 1).size() == 1);

  Bm25Options ro;
  ro.idf = IdfVariant::kRobertson;
  auto rob = Bm25Index::build(docs, ro);
  CHECK(std::abs(rob.score({"big", "cat"}, 2) - oracle::kBm25RobertsonBigCat2) < 1e-9);
  CHECK(rob.score({"cat"}, 0) == 0.0);
}

TEST_CASE("BM25 contracts") {
  auto single = Bm25Index::build({"A dog ran across the field."});
  auto hits = single.search({"dogs"}, 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].doc == 0);
  CHECK(hits[0].score > 0.0);
  CHECK(Bm25Index::analyze("The Dogs, running!") == std::vector<std::string>{"the", "dog", "run"});

  // Equal scores keep document order.
  auto twins = Bm25Index::build({"red hat", "blue cap", "red hat"});
  auto t = twins.search({"red"}, 5);
  REQUIRE(t.size() == 2);
  CHECK(t[0].doc == 0);
  CHECK(t[1].doc == 2);

  // Monotone in tf at fixed length.
  auto tf = Bm25Index::build({"cat x x x", "cat cat x x", "cat cat cat x", "y y y y"});
  CHECK(tf.score({"cat"}, 0) <= tf.score({"cat"}, 1));
  CHECK(tf.score({"cat"}, 1) <= tf.score({"cat"}, 2));

  CHECK_THROWS_AS(Bm25Index::build({}).search({"x"}, 1), DataError);

  const auto dir = (std::filesystem::temp_directory_path() / "semstyle_bm25").string();
  tf.save(dir);
  auto back = Bm25Index::load(dir);
  CHECK(back.size() == 4);
  CHECK(back.score({"cat"}, 2) == tf.score({"cat"}, 2));
}

TEST_CASE("term precision and recall match hand counts") {
  const auto& fixtures = oracle::kPrFixtures;
  for (const auto& f : fixtures) {
    auto pr = term_precision_recall(f.candidates, f.references);
    CHECK(pr.precision == f.precision);
    CHECK(pr.recall == f.recall);
  }
  CHECK_THROWS_AS(term_precision_recall({}, {}), DataError);
  CHECK_THROWS_AS(term_precision_recall({{"a"}}, {}), DataError);
}

TEST_CASE("term precision and recall ignore order") {
  Rng rng(4);
  const std::vector<std::string> terms = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 50; ++trial) {
    Sentences cands;
    std::vector<Sentences> refs;
    for (int i = 0; i < 3; ++i) {
      std::vector<std::string> c;
      for (std::size_t k = 0; k < 1 + rng.below(5); ++k) c.push_back(terms[rng.below(4)]);
      cands.push_back(c);
      Sentences rs;
      for (int r = 0; r < 2; ++r) {
        std::vector<std::string> x;
        for (std::size_t k = 0; k < 1 + rng.below(5); ++k) x.push_back(terms[rng.below(4)]);
        rs.push_back(x);
      }
      refs.push_back(rs);
    }
    auto base = term_precision_recall(cands, refs);
    for (auto& c : cands) rng.shuffle(std::span<std::string>(c));
    for (auto& rs : refs)
      for (auto& r : rs) rng.shuffle(std::span<std::string>(r));
    auto shuffled = term_precision_recall(cands, refs);
    CHECK(shuffled.precision == base.precision);
    CHECK(shuffled.recall == base.recall);
    CHECK(base.precision >= 0.0);
    CHECK(base.precision <= 1.0);
  }
}

TEST_CASE("term coverage") {
  const auto& pipe = termpipe::TermPipeline::shared();
  const auto& lex = termpipe::default_lexicon();
  auto all = term_coverage({"dog_NOUN", "Self_motion_FRAME", "grass_NOUN"},
                           text::normalize("the dog bounded through the fresh grass ."), pipe, lex);
  CHECK(all.word_fraction() == 1.0);
  CHECK(all.frame_fraction() == 1.0);

  auto half = term_coverage({"dog_NOUN", "cat_NOUN"}, text::normalize("a dog on a bed"), pipe, lex);
  CHECK(half.word_fraction() == 0.5);
  CHECK_FALSE(half.frame_fraction().has_value());

  // "stroll" maps to Self_motion; an input Motion frame is its ancestor.
  auto lineage = lex.lineage("Self_motion");
  if (std::find(lineage.begin(), lineage.end(), "Motion") != lineage.end()) {
    auto anc = term_coverage({"Motion_FRAME"}, text::normalize("the man strolled home"), pipe, lex);
    CHECK(anc.frame_fraction() == 1.0);
  }
  auto miss = term_coverage({"Placing_FRAME"}, text::normalize("the man strolled home"), pipe, lex);
  CHECK(miss.frame_fraction() == 0.0);

  Coverage sum = all;
  sum += half;
  CHECK(sum.word_terms == 4);
  CHECK(sum.word_covered == 3);
}

TEST_CASE("style attributes") {
  const auto& pipe = termpipe::TermPipeline::shared();
  auto both = style_attributes({text::normalize("The dog was wearing a vest.")}, pipe);
  CHECK(both.present == 1.0);
  CHECK(both.past == 1.0);
  CHECK(both.first_person == 0.0);

  auto me = style_attributes({text::normalize("i ran home")}, pipe);
  CHECK(me.first_person == 1.0);
  CHECK(me.past == 1.0);
  CHECK(me.present == 0.0);

  auto mix = style_attributes({text::normalize("a man is riding a horse ."), text::normalize("we sat on the bench ."),
                               text::normalize("a red bus .")},
                              pipe);
  CHECK(mix.present == doctest::Approx(1.0 / 3.0));
  CHECK(mix.past == doctest::Approx(1.0 / 3.0));
  CHECK(mix.first_person == doctest::Approx(1.0 / 3.0));
  CHECK(mix.unique_verbs == 3);  // be, ride, sit
}

TEST_CASE("evaluation report") {
  EvalReport r;
  r.sentences = 3;
  r.lm_bits = 4.5;
  r.clf_fraction = 0.25;
  r.validate();
  auto j = r.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"sentences", "lm_bits", "grulm_bits", "clf_fraction", "term_precision",
                                         "term_recall", "coverage_word_terms", "coverage_frame_terms",
                                         "style_attributes"});
  CHECK(j["grulm_bits"].is_null());
  r.clf_fraction = 1.5;
  CHECK_THROWS_AS(r.validate(), NumericError);
  r.clf_fraction = 0.5;
  r.lm_bits = -1.0;
  CHECK_THROWS_AS(r.validate(), NumericError);
}
