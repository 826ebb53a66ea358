// SPDX-License-Identifier: Apache-2.0
#include "semstyle/vocabulary.hpp"

#include <algorithm>
#include <fstream>

#include "semstyle/errors.hpp"
#include "semstyle/text.hpp"

namespace semstyle {

std::string_view style_name(StyleToken s) { return s == StyleToken::kDescriptive ? "desc" : "styled"; }

StyleToken parse_style(std::string_view name) {
  if (name == "desc") return StyleToken::kDescriptive;
  if (name == "styled") return StyleToken::kStyled;
  throw UsageError("unknown style '" + std::string(name) + "' (expected desc or styled)");
}

std::string Vocabulary::style_token_text(std::size_t index) {
  if (index == 0) return "<style_desc>";
  if (index == 1) return "<style_styled>";
  return "<style_" + std::to_string(index) + ">";
}

Vocabulary Vocabulary::build(std::span<const std::string> tokens, const VocabOptions& options) {
  const std::size_t reserved = kSpecialCount + options.style_tokens;
  if (options.cap <= reserved)
    throw UsageError("vocabulary cap " + std::to_string(options.cap) + " must exceed the " +
                     std::to_string(reserved) + " reserved tokens");
  if (tokens.empty()) throw DataError("cannot build a vocabulary from an empty token stream");

  struct Entry {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, Entry> counts;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto [it, inserted] = counts.try_emplace(tokens[i], Entry{0, i});
    if (inserted) order.push_back(tokens[i]);
    ++it->second.count;
  }

  Vocabulary v;
  v.style_count_ = options.style_tokens;
  v.tokens_ = {std::string(kPadToken), std::string(kUnkToken), std::string(kBosToken), std::string(kEosToken)};
  for (std::size_t s = 0; s < options.style_tokens; ++s) v.tokens_.push_back(style_token_text(s));

  std::vector<std::string> candidates;
  for (const auto& t : order) {
    if (counts[t].count < options.min_count) continue;
    if (std::find(v.tokens_.begin(), v.tokens_.end(), t) != v.tokens_.end()) continue;
    candidates.push_back(t);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const std::string& a, const std::string& b) { return counts[a].count > counts[b].count; });
  const std::size_t room = options.cap - reserved;
  if (candidates.size() > room) candidates.resize(room);
  for (auto& t : candidates) v.tokens_.push_back(std::move(t));
  v.index();
  return v;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& sentences, const VocabOptions& options) {
  std::vector<std::string> flat;
  for (const auto& s : sentences) flat.insert(flat.end(), s.begin(), s.end());
  return build(std::span<const std::string>(flat), options);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < kSpecialCount || tokens[kPad] != kPadToken || tokens[kUnk] != kUnkToken ||
      tokens[kBos] != kBosToken || tokens[kEos] != kEosToken)
    throw DataError("vocabulary does not start with the reserved tokens <pad> <unk> <s> </s>");
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  while (kSpecialCount + v.style_count_ < v.tokens_.size() &&
         v.tokens_[kSpecialCount + v.style_count_] == style_token_text(v.style_count_))
    ++v.style_count_;
  v.index();
  if (v.ids_.size() != v.tokens_.size()) throw DataError("vocabulary contains duplicate tokens");
  return v;
}

void Vocabulary::index() {
  ids_.clear();
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], static_cast<int>(i));
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw DataError("token id " + std::to_string(id) + " out of vocabulary range");
  return tokens_[static_cast<std::size_t>(id)];
}

bool Vocabulary::contains(std::string_view token) const { return ids_.count(std::string(token)) > 0; }

int Vocabulary::style_id(StyleToken s) const {
  const auto idx = static_cast<std::size_t>(s);
  if (idx >= style_count_) throw UsageError("vocabulary has no reserved id for style " + std::string(style_name(s)));
  return static_cast<int>(kSpecialCount + idx);
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id_of(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const int> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(token_of(id));
  return out;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) { return from_tokens(text::load_lines(path, false)); }

}  // namespace semstyle
