// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "semstyle/checkpoint.hpp"
#include "semstyle/models/grulm.hpp"
#include "semstyle/models/langgen.hpp"
#include "semstyle/models/termgen.hpp"
#include "semstyle/vocabulary.hpp"

namespace semstyle {

// A trained model together with the vocabularies that give its ids
// meaning. Checkpoints hold float32 parameters.
struct TermGenBundle {
  models::TermGenModel<float> model;
  Vocabulary terms;
};

struct LangGenBundle {
  models::LangGenModel<float> model;
  Vocabulary input;
  Vocabulary output;
};

struct GruLmBundle {
  models::GruLm<float> model;
  Vocabulary words;
};

nlohmann::ordered_json to_json(const models::TermGenConfig& c);
nlohmann::ordered_json to_json(const models::LangGenConfig& c);
nlohmann::ordered_json to_json(const models::GruLmConfig& c);
models::TermGenConfig termgen_config_from_json(const nlohmann::ordered_json& j);
models::LangGenConfig langgen_config_from_json(const nlohmann::ordered_json& j);
models::GruLmConfig grulm_config_from_json(const nlohmann::ordered_json& j);

checkpoint::Checkpoint to_checkpoint(const TermGenBundle& b);
checkpoint::Checkpoint to_checkpoint(const LangGenBundle& b);
checkpoint::Checkpoint to_checkpoint(const GruLmBundle& b);

// Throw CheckpointError(kIncompatible) when the kind tag or the tensor
// manifest does not fit.
TermGenBundle termgen_from_checkpoint(const checkpoint::Checkpoint& c);
LangGenBundle langgen_from_checkpoint(const checkpoint::Checkpoint& c);
GruLmBundle grulm_from_checkpoint(const checkpoint::Checkpoint& c);

inline void save_bundle(const TermGenBundle& b, const std::string& path) { checkpoint::save(to_checkpoint(b), path); }
inline void save_bundle(const LangGenBundle& b, const std::string& path) { checkpoint::save(to_checkpoint(b), path); }
inline void save_bundle(const GruLmBundle& b, const std::string& path) { checkpoint::save(to_checkpoint(b), path); }
inline TermGenBundle load_termgen(const std::string& path) { return termgen_from_checkpoint(checkpoint::load(path)); }
inline LangGenBundle load_langgen(const std::string& path) { return langgen_from_checkpoint(checkpoint::load(path)); }
inline GruLmBundle load_grulm(const std::string& path) { return grulm_from_checkpoint(checkpoint::load(path)); }

}  // namespace semstyle
