// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "semstyle/checkpoint.hpp"
#include "semstyle/model_io.hpp"
#include "semstyle/text.hpp"
#include "semstyle/trainer.hpp"

using namespace semstyle;
using namespace semstyle::trainer;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "semstyle_test_trainer";
  fs::create_directories(dir);
  return dir / name;
}

TrainConfig toy_config() {
  TrainConfig c;
  c.learning_rate = 0.01;
  c.batch_size = 4;
  c.epochs = 5;
  c.validation_fraction = 0.0;
  c.dropout = 0.0;
  c.embed_dim = 8;
  c.hidden_dim = 12;
  c.feature_dim = 6;
  c.seed = 9;
  return c;
}

// 20 images, each with a distinct 1-3 term target.
TermGenData toy_termgen(std::size_t feature_dim, std::size_t n = 20) {
  TermGenData d;
  Rng rng(77);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<float> f(feature_dim);
    for (auto& v : f) v = static_cast<float>(rng.uniform(-1, 1));
    d.features.push_back(f);
    std::vector<int> terms;
    for (std::size_t k = 0; k <= i % 3; ++k) terms.push_back(static_cast<int>(4 + (i * 3 + k * 5) % 10));
    d.examples.push_back({i, terms});
  }
  return d;
}

models::TermGenConfig termgen_config(const TrainConfig& c) {
  models::TermGenConfig m;
  m.feature_dim = c.feature_dim;
  m.embed_dim = c.embed_dim;
  m.hidden_dim = c.hidden_dim;
  m.vocab_size = 14;
  m.dropout = c.dropout;
  return m;
}

TermGenBundle toy_bundle(const TrainConfig& c, TrainResult* r = nullptr) {
  auto data = toy_termgen(c.feature_dim);
  std::vector<std::string> toks = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  TermGenBundle b{models::TermGenModel<float>::create(termgen_config(c), c.seed), Vocabulary::build(toks, {})};
  auto res = fit_termgen(b.model, data, c);
  if (r) *r = res;
  return b;
}

}  // namespace

TEST_CASE("checkpoint round trip is bitwise") {
  auto c = toy_config();
  auto b = toy_bundle(c);
  const auto path = scratch("roundtrip.ckpt").string();
  save_bundle(b, path);
  auto back = load_termgen(path);
  CHECK(back.terms == b.terms);
  nn::TensorRefs<float> x, y;
  b.model.params().collect(x);
  back.model.params().collect(y);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].name == y[i].name);
    CHECK(std::memcmp(x[i].tensor->data.data(), y[i].tensor->data.data(), 4 * x[i].tensor->size()) == 0);
  }
  CHECK(checkpoint::serialize(to_checkpoint(back)) == checkpoint::serialize(to_checkpoint(b)));
  CHECK(back.model.config().hidden_dim == 12);
  for (const auto& e : fs::directory_iterator(scratch("").parent_path()))
    CHECK(e.path().string().find(".tmp") == std::string::npos);
}

TEST_CASE("checkpoint errors are distinct") {
  auto b = toy_bundle(toy_config());
  const std::string bytes = checkpoint::serialize(to_checkpoint(b));
  auto kind_of = [](const std::string& data) {
    try {
      checkpoint::deserialize(data);
    } catch (const checkpoint::CheckpointError& e) {
      return e.kind();
    }
    FAIL("no error");
    return checkpoint::ErrorKind::kIo;
  };
  CHECK(kind_of(bytes.substr(0, bytes.size() - 3)) == checkpoint::ErrorKind::kPayloadLength);
  CHECK(kind_of(bytes + "xxxx") == checkpoint::ErrorKind::kPayloadLength);
  CHECK(kind_of(bytes.substr(0, 12)) == checkpoint::ErrorKind::kPayloadLength);
  std::string magic = bytes;
  magic[0] = 'X';
  CHECK(kind_of(magic) == checkpoint::ErrorKind::kBadMagic);
  try {
    checkpoint::deserialize(magic);
  } catch (const checkpoint::CheckpointError& e) {
    CHECK(std::string(e.what()).find("SEMSTYLE1") != std::string::npos);
  }
  std::string version = bytes;
  version[8] = '2';
  CHECK(kind_of(version) == checkpoint::ErrorKind::kVersionMismatch);
  std::string manifest = bytes;
  manifest[17] = '#';
  CHECK(kind_of(manifest) == checkpoint::ErrorKind::kManifest);

  const auto path = scratch("truncated.ckpt").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(load_termgen(path), checkpoint::CheckpointError);
  CHECK_THROWS_AS(load_langgen(scratch("roundtrip.ckpt").string()), checkpoint::CheckpointError);
  CHECK_THROWS_AS(load_termgen(scratch("missing.ckpt").string()), DataError);
}

TEST_CASE("training config") {
  auto j = nlohmann::ordered_json::parse(R"({"learning_rate": 0.002, "mode": "romonly", "batch_size": 64})");
  auto c = config_from_json(j);
  CHECK(c.learning_rate == 0.002);
  CHECK(c.mode == TrainMode::kRomOnly);
  CHECK(c.batch_size == 64);
  CHECK(c.epochs == 50);
  CHECK(config_from_json(to_json(c)).batch_size == 64);
  CHECK_THROWS_AS(config_from_json(nlohmann::ordered_json::parse(R"({"lr": 1})")), UsageError);
  CHECK_THROWS_AS(config_from_json(nlohmann::ordered_json::parse(R"({"clip_min": 5, "clip_max": 5})")), UsageError);
  CHECK_THROWS_AS(config_from_json(nlohmann::ordered_json::parse(R"({"batch_size": 0})")), UsageError);
  CHECK_THROWS_AS(config_from_json(nlohmann::ordered_json::parse(R"({"batch_size": "x"})")), DataError);
  CHECK_THROWS_AS(parse_mode("both"), UsageError);
  TrainConfig d;
  CHECK(d.learning_rate == 0.001);
  CHECK(d.batch_size == 128);
  CHECK(d.clip_min == -5.0);
  CHECK(d.clip_max == 5.0);
}

TEST_CASE("term generator overfits twenty pairs") {
  auto c = toy_config();
  c.epochs = 150;
  c.learning_rate = 0.02;
  TrainResult r;
  auto b = toy_bundle(c, &r);
  CHECK(r.history.back().train_loss < 0.05);
  CHECK(r.history.size() == 150);
  auto data = toy_termgen(c.feature_dim);
  std::size_t exact = 0;
  for (const auto& e : data.examples) exact += b.model.decode(data.features[e.feature], 20) == e.terms;
  CHECK(exact == 20);
}

TEST_CASE("same seed gives identical checkpoints, other seed does not") {
  auto c = toy_config();
  auto one = checkpoint::serialize(to_checkpoint(toy_bundle(c)));
  auto two = checkpoint::serialize(to_checkpoint(toy_bundle(c)));
  CHECK(one == two);
  c.seed = 10;
  CHECK(checkpoint::serialize(to_checkpoint(toy_bundle(c))) != one);

  c.seed = 9;
  c.threads = 3;
  c.dropout = 0.3;
  auto t1 = checkpoint::serialize(to_checkpoint(toy_bundle(c)));
  CHECK(t1 == checkpoint::serialize(to_checkpoint(toy_bundle(c))));
}

TEST_CASE("zero learning rate leaves the model and loss fixed") {
  auto c = toy_config();
  c.learning_rate = 0.0;
  auto data = toy_termgen(c.feature_dim);
  auto model = models::TermGenModel<float>::create(termgen_config(c), c.seed);
  const auto before = checkpoint::serialize(to_checkpoint(TermGenBundle{model, {}}));
  auto r = fit_termgen(model, data, c);
  for (const auto& e : r.history) CHECK(e.train_loss == doctest::Approx(r.history[0].train_loss).epsilon(1e-6));
  CHECK(checkpoint::serialize(to_checkpoint(TermGenBundle{model, {}})) == before);
}

TEST_CASE("early stopping restores the best validation epoch") {
  auto c = toy_config();
  c.epochs = 60;
  c.learning_rate = 0.05;
  c.validation_fraction = 0.5;
  c.patience = 2;
  // Targets unrelated to features: validation loss rises once training memorises.
  auto data = toy_termgen(c.feature_dim, 40);
  Rng rng(5);
  for (auto& e : data.examples)
    for (auto& t : e.terms) t = static_cast<int>(4 + rng.below(10));
  auto model = models::TermGenModel<float>::create(termgen_config(c), c.seed);
  auto r = fit_termgen(model, data, c);
  CHECK(r.early_stopped);
  CHECK(r.history.size() == r.best_epoch + c.patience);
  double best = 1e9;
  for (const auto& e : r.history) best = std::min(best, e.validation_loss);
  CHECK(r.history[r.best_epoch - 1].validation_loss == best);
}

TEST_CASE("max_steps caps Adam updates") {
  auto c = toy_config();
  c.epochs = 50;
  c.max_steps = 7;
  TrainResult r;
  toy_bundle(c, &r);
  CHECK(r.steps == 7);
  CHECK(r.history.size() == 2);
}

TEST_CASE("pathological inputs stay finite; NaN aborts") {
  auto c = toy_config();
  c.learning_rate = 0.5;
  auto data = toy_termgen(c.feature_dim);
  for (auto& f : data.features)
    for (auto& v : f) v *= 1e6f;
  auto model = models::TermGenModel<float>::create(termgen_config(c), c.seed);
  fit_termgen(model, data, c);
  nn::TensorRefs<float> refs;
  model.params().collect(refs);
  for (const auto& r : refs)
    for (float v : r.tensor->data) REQUIRE(std::isfinite(v));

  data.features[3][0] = std::nanf("");
  CHECK_THROWS_AS(fit_termgen(model, data, c), NumericError);
  CHECK_THROWS_AS(fit_termgen(model, TermGenData{}, c), DataError);
}

namespace {

models::LangGenConfig seq_config() {
  models::LangGenConfig m;
  m.in_vocab = 10;
  m.out_vocab = 12;
  m.term_embed_dim = 6;
  m.word_embed_dim = 6;
  m.encoder_hidden = 8;
  m.dropout = 0.0;
  return m;
}

std::vector<Seq2SeqExample> seq_examples(StyleToken s, std::size_t n) {
  std::vector<Seq2SeqExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    int t = static_cast<int>(6 + i % 4);
    out.push_back({{t, models::style_input_id(s)}, {t, static_cast<int>(4 + i % 8)}});
  }
  return out;
}

}  // namespace

TEST_CASE("training modes consume the expected sources") {
  auto c = toy_config();
  c.epochs = 3;
  auto desc = seq_examples(StyleToken::kDescriptive, 20);
  auto sty = seq_examples(StyleToken::kStyled, 12);

  c.mode = TrainMode::kJoint;
  auto m = models::LangGenModel<float>::create(seq_config(), 1);
  auto joint = fit_seq2seq(m, desc, sty, c);
  CHECK(joint.descriptive_items == joint.styled_items);
  CHECK(joint.styled_items == 3 * 12);

  c.mode = TrainMode::kRomOnly;
  auto rom = fit_seq2seq(m, desc, sty, c);
  CHECK(rom.descriptive_items == 0);
  CHECK(rom.styled_items == 3 * 12);
  auto rom_alone = fit_seq2seq(m, {}, sty, c);
  CHECK(rom_alone.styled_items == rom.styled_items);

  c.mode = TrainMode::kCocoOnly;
  auto coco = fit_seq2seq(m, desc, sty, c);
  CHECK(coco.styled_items == 0);
  CHECK(coco.descriptive_items == 3 * 20);

  c.mode = TrainMode::kJoint;
  CHECK_THROWS_AS(fit_seq2seq(m, desc, {}, c), DataError);
  c.mode = TrainMode::kRomOnly;
  CHECK_THROWS_AS(fit_seq2seq(m, desc, {}, c), DataError);
}

TEST_CASE("language generator overfits the exemplar pair") {
  const auto& pipeline = termpipe::TermPipeline::shared();
  const auto& lex = termpipe::default_lexicon();
  auto sentence = text::normalize("The dog bounded through the fresh grass.");
  auto terms = sentence_terms(sentence, pipeline, lex);
  CHECK(terms == std::vector<std::string>{"dog_NOUN", "Self_motion_FRAME", "grass_NOUN"});

  auto c = toy_config();
  c.mode = TrainMode::kRomOnly;
  c.batch_size = 1;
  c.epochs = 300;
  c.embed_dim = 8;
  c.hidden_dim = 8;
  TrainResult r;
  auto b = train_langgen({}, {sentence}, pipeline, lex, c, &r);
  CHECK(r.history.back().train_loss < 0.01);
  auto out = b.model.generate(b.input.encode(terms), StyleToken::kStyled);
  CHECK(b.output.decode(out.words) == sentence);
}

TEST_CASE("gru language model overfits one sentence") {
  auto c = toy_config();
  c.batch_size = 1;
  c.epochs = 200;
  std::vector<std::vector<std::string>> one = {text::normalize("the cat sat on the warm mat .")};
  auto b = train_gru_lm(one, c);
  auto ids = b.words.encode(one[0]);
  auto lp = b.model.log2_probs(ids);
  double bits = 0;
  for (double v : lp) bits -= v;
  CHECK(bits / static_cast<double>(lp.size()) < 0.1);
}
