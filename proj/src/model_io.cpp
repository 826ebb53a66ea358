// SPDX-License-Identifier: Apache-2.0
#include "semstyle/model_io.hpp"

namespace semstyle {

using Json = nlohmann::ordered_json;
using checkpoint::Checkpoint;
using checkpoint::CheckpointError;
using checkpoint::ErrorKind;

namespace {

template <typename T>
void read(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void expect_kind(const Checkpoint& c, const std::string& kind) {
  if (c.kind != kind)
    throw CheckpointError(ErrorKind::kIncompatible, "checkpoint holds a '" + c.kind + "' model, expected '" + kind + "'");
}

template <typename P>
nn::TensorRefs<float> refs(P& p) {
  nn::TensorRefs<float> r;
  p.collect(r);
  return r;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(ErrorKind::kManifest, std::string("bad model config: ") + e.what());
  }
}

}  // namespace

Json to_json(const models::TermGenConfig& c) {
  return Json{{"feature_dim", c.feature_dim}, {"embed_dim", c.embed_dim},
              {"hidden_dim", c.hidden_dim},   {"vocab_size", c.vocab_size},
              {"tanh_projection", c.tanh_projection}, {"image_as_h0", c.image_as_h0},
              {"dropout", c.dropout},         {"max_len", c.max_len}};
}

Json to_json(const models::LangGenConfig& c) {
  return Json{{"in_vocab", c.in_vocab},
              {"out_vocab", c.out_vocab},
              {"term_embed_dim", c.term_embed_dim},
              {"word_embed_dim", c.word_embed_dim},
              {"encoder_hidden", c.encoder_hidden},
              {"init_from_first_backward", c.init_from_first_backward},
              {"dropout", c.dropout},
              {"max_len", c.max_len}};
}

Json to_json(const models::GruLmConfig& c) {
  return Json{{"vocab_size", c.vocab_size}, {"embed_dim", c.embed_dim}, {"hidden_dim", c.hidden_dim},
              {"dropout", c.dropout}};
}

models::TermGenConfig termgen_config_from_json(const Json& j) {
  models::TermGenConfig c;
  read(j, "feature_dim", c.feature_dim);
  read(j, "embed_dim", c.embed_dim);
  read(j, "hidden_dim", c.hidden_dim);
  read(j, "vocab_size", c.vocab_size);
  read(j, "tanh_projection", c.tanh_projection);
  read(j, "image_as_h0", c.image_as_h0);
  read(j, "dropout", c.dropout);
  read(j, "max_len", c.max_len);
  return c;
}

models::LangGenConfig langgen_config_from_json(const Json& j) {
  models::LangGenConfig c;
  read(j, "in_vocab", c.in_vocab);
  read(j, "out_vocab", c.out_vocab);
  read(j, "term_embed_dim", c.term_embed_dim);
  read(j, "word_embed_dim", c.word_embed_dim);
  read(j, "encoder_hidden", c.encoder_hidden);
  read(j, "init_from_first_backward", c.init_from_first_backward);
  read(j, "dropout", c.dropout);
  read(j, "max_len", c.max_len);
  return c;
}

models::GruLmConfig grulm_config_from_json(const Json& j) {
  models::GruLmConfig c;
  read(j, "vocab_size", c.vocab_size);
  read(j, "embed_dim", c.embed_dim);
  read(j, "hidden_dim", c.hidden_dim);
  read(j, "dropout", c.dropout);
  return c;
}

Checkpoint to_checkpoint(const TermGenBundle& b) {
  Checkpoint c;
  c.kind = "termgen";
  c.config = to_json(b.model.config());
  c.vocabularies.emplace_back("terms", b.terms);
  auto p = b.model.params();
  checkpoint::put_tensors(c, refs(p));
  return c;
}

Checkpoint to_checkpoint(const LangGenBundle& b) {
  Checkpoint c;
  c.kind = "langgen";
  c.config = to_json(b.model.config());
  c.vocabularies.emplace_back("input", b.input);
  c.vocabularies.emplace_back("output", b.output);
  auto p = b.model.params();
  checkpoint::put_tensors(c, refs(p));
  return c;
}

Checkpoint to_checkpoint(const GruLmBundle& b) {
  Checkpoint c;
  c.kind = "grulm";
  c.config = to_json(b.model.config());
  c.vocabularies.emplace_back("words", b.words);
  auto p = b.model.params();
  checkpoint::put_tensors(c, refs(p));
  return c;
}

TermGenBundle termgen_from_checkpoint(const Checkpoint& c) {
  expect_kind(c, "termgen");
  TermGenBundle b{models::TermGenModel<float>(guarded([&] { return termgen_config_from_json(c.config); })),
                  c.vocabulary("terms")};
  checkpoint::get_tensors(c, refs(b.model.params()));
  if (b.terms.size() != b.model.config().vocab_size)
    throw CheckpointError(ErrorKind::kIncompatible, "term vocabulary size disagrees with the model");
  return b;
}

LangGenBundle langgen_from_checkpoint(const Checkpoint& c) {
  expect_kind(c, "langgen");
  LangGenBundle b{models::LangGenModel<float>(guarded([&] { return langgen_config_from_json(c.config); })),
                  c.vocabulary("input"), c.vocabulary("output")};
  checkpoint::get_tensors(c, refs(b.model.params()));
  if (b.input.size() != b.model.config().in_vocab || b.output.size() != b.model.config().out_vocab)
    throw CheckpointError(ErrorKind::kIncompatible, "vocabulary sizes disagree with the model");
  return b;
}

GruLmBundle grulm_from_checkpoint(const Checkpoint& c) {
  expect_kind(c, "grulm");
  GruLmBundle b{models::GruLm<float>(guarded([&] { return grulm_config_from_json(c.config); })),
                c.vocabulary("words")};
  checkpoint::get_tensors(c, refs(b.model.params()));
  if (b.words.size() != b.model.config().vocab_size)
    throw CheckpointError(ErrorKind::kIncompatible, "vocabulary size disagrees with the model");
  return b;
}

}  // namespace semstyle
