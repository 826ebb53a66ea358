// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semstyle/errors.hpp"
#include "semstyle/nn/tensor.hpp"
#include "semstyle/vocabulary.hpp"

namespace semstyle::checkpoint {

// File layout: the 9 bytes "SEMSTYLE1", a little-endian u64 manifest
// length, the JSON manifest, then every tensor as little-endian float32 in
// manifest order.
inline constexpr std::string_view kMagic = "SEMSTYLE1";
inline constexpr int kFormatVersion = 1;

enum class ErrorKind { kIo, kBadMagic, kVersionMismatch, kManifest, kPayloadLength, kIncompatible };

std::string_view error_name(ErrorKind kind);

class CheckpointError : public DataError {
 public:
  CheckpointError(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct TensorEntry {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> values;
};

struct Checkpoint {
  std::string kind;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, Vocabulary>> vocabularies;
  std::vector<TensorEntry> tensors;

  const Vocabulary& vocabulary(std::string_view name) const;
};

// Writes to a temporary sibling and renames it over `path`.
void save(const Checkpoint& ckpt, const std::string& path);
Checkpoint load(const std::string& path);

// Serialized bytes, as written by save().
std::string serialize(const Checkpoint& ckpt);
Checkpoint deserialize(std::string_view bytes, const std::string& origin = "<memory>");

template <typename T>
void put_tensors(Checkpoint& ckpt, const nn::TensorRefs<T>& refs) {
  for (const auto& r : refs) {
    TensorEntry e{r.name, r.tensor->shape, {}};
    e.values.assign(r.tensor->data.begin(), r.tensor->data.end());
    ckpt.tensors.push_back(std::move(e));
  }
}

// Names, order and shapes must match exactly.
template <typename T>
void get_tensors(const Checkpoint& ckpt, const nn::TensorRefs<T>& refs) {
  if (ckpt.tensors.size() != refs.size())
    throw CheckpointError(ErrorKind::kIncompatible, "checkpoint holds " + std::to_string(ckpt.tensors.size()) +
                                                        " tensors, model expects " + std::to_string(refs.size()));
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& e = ckpt.tensors[i];
    if (e.name != refs[i].name || e.shape != refs[i].tensor->shape)
      throw CheckpointError(ErrorKind::kIncompatible, "tensor " + std::to_string(i) + " is '" + e.name +
                                                          "', model expects '" + refs[i].name + "' of another shape");
    refs[i].tensor->data.assign(e.values.begin(), e.values.end());
  }
}

}  // namespace semstyle::checkpoint
