// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semstyle {

enum class StyleToken { kDescriptive = 0, kStyled = 1 };

std::string_view style_name(StyleToken s);
StyleToken parse_style(std::string_view name);  // "desc" | "styled"

struct VocabOptions {
  std::size_t cap = 20000;    // total entries including reserved ids
  std::size_t min_count = 1;
  std::size_t style_tokens = 0;  // reserved style ids following the four specials
};

// Bijective token <-> id map. Ids 0..3 are PAD, UNK, BOS, EOS; optional
// style tokens follow; regular tokens are ordered by descending frequency,
// ties by first occurrence.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr std::size_t kSpecialCount = 4;

  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kBosToken = "<s>";
  static constexpr std::string_view kEosToken = "</s>";

  Vocabulary() = default;

  // Throws DataError on an empty stream, UsageError when cap does not
  // exceed the reserved count.
  static Vocabulary build(std::span<const std::string> tokens, const VocabOptions& options);
  static Vocabulary build(const std::vector<std::vector<std::string>>& sentences, const VocabOptions& options);

  // Rebuilds from an id-ordered token list (checkpoint / vocab file).
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  int id_of(std::string_view token) const;
  const std::string& token_of(int id) const;
  bool contains(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  std::size_t reserved_count() const { return kSpecialCount + style_count_; }
  std::size_t style_count() const { return style_count_; }
  int style_id(StyleToken s) const;

  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(std::span<const int> ids) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

  static std::string style_token_text(std::size_t index);

 private:
  void index();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  std::size_t style_count_ = 0;
};

}  // namespace semstyle
