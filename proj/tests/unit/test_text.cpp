// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "semstyle/rng.hpp"
#include "semstyle/text.hpp"

using namespace semstyle;
using semstyle::text::normalize;

namespace {

std::string norm(std::string_view s) { return text::join(normalize(s)); }

}  // namespace

TEST_CASE("normalize lowercases and keeps only comma, period and apostrophe") {
  CHECK(norm("She watched the Dog run!") == "she watched the dog run");
  CHECK(norm("Wait -- what? \"Yes\", she said.") == "wait what yes , she said .");
  CHECK(norm("") == "");
  CHECK(norm("   \t ") == "");
}

TEST_CASE("normalize splits clitics") {
  CHECK(norm("I didn't know she'd come") == "i did n't know she 'd come");
  CHECK(norm("It's the dog's bone") == "it 's the dog 's bone");
  CHECK(norm("we're here, they'll go, I've seen, I'm done") ==
        "we 're here , they 'll go , i 've seen , i 'm done");
}

TEST_CASE("normalize replaces numbers") {
  CHECK(norm("2 dogs and 3.5 cats in 1999") == "<num> dogs and <num> cats in <num>");
}

TEST_CASE("normalize collapses repeated punctuation") {
  CHECK(norm("Wait... no,, yes.") == "wait . no , yes .");
}

TEST_CASE("normalize is idempotent") {
  const char* samples[] = {"Hello, World... It's 5 o'clock!", "rock'n'roll isn't dead", "A B  C.",
                           "  ''quoted'' text ,, here  ", "don't can't won't", "x.y.z 12,000"};
  for (const char* s : samples) {
    auto once = normalize(s);
    CHECK(normalize(text::join(once)) == once);
  }
  Rng rng(3);
  const std::string alphabet = "abcXYZ09 ,.'!?-\"n";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    std::size_t n = rng.below(30);
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng.below(alphabet.size())];
    auto once = normalize(s);
    CHECK_MESSAGE(normalize(text::join(once)) == once, s);
  }
}

TEST_CASE("word count ignores punctuation") {
  CHECK(text::word_count(normalize("a dog, a cat.")) == 4);
}

TEST_CASE("porter stemmer reference outputs") {
  // Reference pairs from the stemmer's published vocabulary/output lists.
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},          {"caress", "caress"},
      {"cats", "cat"},        {"feed", "feed"},         {"agreed", "agre"},      {"plastered", "plaster"},
      {"bled", "bled"},       {"motoring", "motor"},    {"sing", "sing"},        {"conflated", "conflat"},
      {"troubled", "troubl"}, {"sized", "size"},        {"hopping", "hop"},      {"tanned", "tan"},
      {"falling", "fall"},    {"hissing", "hiss"},      {"fizzed", "fizz"},      {"failing", "fail"},
      {"filing", "file"},     {"happy", "happi"},       {"sky", "sky"},          {"relational", "relat"},
      {"conditional", "condit"}, {"rational", "ration"}, {"valenci", "valenc"}, {"digitizer", "digit"},
      {"conformabli", "conform"}, {"radicalli", "radic"}, {"differentli", "differ"}, {"vileli", "vile"},
      {"analogousli", "analog"}, {"vietnamization", "vietnam"}, {"predication", "predic"},
      {"operator", "oper"},   {"feudalism", "feudal"},  {"decisiveness", "decis"}, {"hopefulness", "hope"},
      {"callousness", "callous"}, {"formaliti", "formal"}, {"sensitiviti", "sensit"},
      {"sensibiliti", "sensibl"}, {"triplicate", "triplic"}, {"formative", "form"}, {"formalize", "formal"},
      {"electriciti", "electr"}, {"electrical", "electr"}, {"hopeful", "hope"}, {"goodness", "good"},
      {"revival", "reviv"},   {"allowance", "allow"},   {"inference", "infer"},  {"airliner", "airlin"},
      {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"}, {"defensible", "defens"},
      {"irritant", "irrit"},  {"replacement", "replac"}, {"adjustment", "adjust"}, {"dependent", "depend"},
      {"adoption", "adopt"},  {"homologou", "homolog"}, {"communism", "commun"}, {"activate", "activ"},
      {"angulariti", "angular"}, {"homologous", "homolog"}, {"effective", "effect"}, {"bowdlerize", "bowdler"},
      {"probate", "probat"},  {"rate", "rate"},         {"cease", "ceas"},       {"controll", "control"},
      {"roll", "roll"},       {"generalizations", "gener"}, {"oscillators", "oscil"}, {"dogs", "dog"},
      {"running", "run"},     {"walked", "walk"},
  };
  for (const auto& [in, out] : cases) CHECK_MESSAGE(text::porter_stem(in) == out, in);
  CHECK(text::porter_stem("a") == "a");
  CHECK(text::porter_stem("<num>") == "<num>");
}

TEST_CASE("utf8 validation") {
  CHECK(text::valid_utf8("caf\xc3\xa9"));
  CHECK_FALSE(text::valid_utf8("bad \xc3"));
  CHECK_FALSE(text::valid_utf8("\xff\xfe"));
}

TEST_CASE("rng streams are reproducible and keyed") {
  auto a = Rng::derive(42, {1, 2});
  auto b = Rng::derive(42, {1, 2});
  auto c = Rng::derive(42, {2, 1});
  auto x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
