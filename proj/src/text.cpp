// SPDX-License-Identifier: Apache-2.0
#include "semstyle/text.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "semstyle/errors.hpp"

#ifndef SEMSTYLE_DEFAULT_DATA_DIR
#define SEMSTYLE_DEFAULT_DATA_DIR "data"
#endif

namespace semstyle::text {

namespace {

constexpr std::array<std::string_view, 7> kClitics = {"n't", "'s", "'re", "'ll", "'ve", "'m", "'d"};

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '\'' || c >= 0x80; }

bool is_number(std::string_view w) { return !w.empty() && std::isdigit(static_cast<unsigned char>(w[0])); }

bool is_clitic(std::string_view w) {
  for (auto c : kClitics)
    if (w == c) return true;
  return false;
}

void emit_word(std::string word, std::vector<std::string>& out) {
  // Quotes written with apostrophes: strip them unless the word is a clitic.
  if (!is_clitic(word)) {
    std::size_t b = 0, e = word.size();
    while (b < e && word[b] == '\'') ++b;
    while (e > b && word[e - 1] == '\'') --e;
    word = word.substr(b, e - b);
  }
  if (word.empty()) return;
  if (is_number(word)) {
    out.emplace_back(kNumberToken);
    return;
  }
  if (!is_clitic(word)) {
    for (auto c : kClitics) {
      if (word.size() > c.size() && word.ends_with(c)) {
        std::string head = word.substr(0, word.size() - c.size());
        if (head.back() == '\'') break;
        out.push_back(std::move(head));
        out.emplace_back(c);
        return;
      }
    }
  }
  out.push_back(std::move(word));
}

void emit_punct(char c, std::vector<std::string>& out) {
  std::string p(1, c);
  if (!out.empty() && out.back() == p) return;  // "..." -> "."
  out.push_back(std::move(p));
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> normalize(std::string_view raw) {
  const std::string s = to_lower(raw);
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (s.compare(i, kNumberToken.size(), kNumberToken) == 0) {
      out.emplace_back(kNumberToken);
      i += kNumberToken.size();
      continue;
    }
    if (std::isdigit(c)) {
      // Numbers may carry internal separators: 1,000 or 3.5
      std::size_t j = i;
      while (j < n) {
        const auto d = static_cast<unsigned char>(s[j]);
        if (std::isalnum(d)) {
          ++j;
        } else if ((d == '.' || d == ',') && j + 1 < n && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
          ++j;
        } else {
          break;
        }
      }
      out.emplace_back(kNumberToken);
      i = j;
      continue;
    }
    if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < n && is_word_byte(static_cast<unsigned char>(s[j]))) ++j;
      emit_word(s.substr(i, j - i), out);
      i = j;
      continue;
    }
    if (c == ',' || c == '.') emit_punct(static_cast<char>(c), out);
    ++i;
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens, char sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(sep);
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token)
    if (std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80) return false;
  return token != kNumberToken;
}

std::size_t word_count(const std::vector<std::string>& tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens)
    if (!is_punctuation(t)) ++n;
  return n;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    if (c < 0x80) {
      len = 1;
    } else if ((c >> 5) == 0x6) {
      len = 2;
    } else if ((c >> 4) == 0xe) {
      len = 3;
    } else if ((c >> 3) == 0x1e) {
      len = 4;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    if (c == 0) return false;
    i += len;
  }
  return true;
}

std::vector<std::string> load_lines(const std::string& path, bool skip_comments) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_comments) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto e = line.find_last_not_of(" \t");
      line.erase(e == std::string::npos ? 0 : e + 1);
      auto b = line.find_first_not_of(" \t");
      line.erase(0, b == std::string::npos ? line.size() : b);
      if (line.empty()) continue;
    }
    out.push_back(line);
  }
  return out;
}

std::unordered_set<std::string> load_word_set(const std::string& path) {
  auto lines = load_lines(path);
  return {lines.begin(), lines.end()};
}

std::string data_dir() {
  if (const char* env = std::getenv("SEMSTYLE_DATA_DIR"); env && *env) return env;
  return SEMSTYLE_DEFAULT_DATA_DIR;
}

std::string data_path(std::string_view file) { return data_dir() + "/" + std::string(file); }

}  // namespace semstyle::text
