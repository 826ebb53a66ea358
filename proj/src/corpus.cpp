// SPDX-License-Identifier: Apache-2.0
#include "semstyle/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "semstyle/errors.hpp"
#include "semstyle/text.hpp"

namespace semstyle::corpus {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string StyledSentence::text() const { return text::join(tokens); }

namespace {

std::vector<float> read_feature_file(const fs::path& path, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != dim * 4)
    throw DataError("feature file " + path.string() + " holds " + std::to_string(bytes.size()) + " bytes, expected " +
                    std::to_string(dim * 4));
  std::vector<float> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) | (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    out[i] = std::bit_cast<float>(u);
  }
  return out;
}

CaptionRecord parse_record(const std::string& line, const fs::path& base, const LoadOptions& options) {
  const std::size_t dim = options.feature_dim;
  json j = json::parse(line);
  if (!j.is_object()) throw DataError("record is not an object");
  CaptionRecord rec;
  if (!j.contains("image_id") || !j["image_id"].is_string()) throw DataError("missing string field image_id");
  rec.image_id = j["image_id"].get<std::string>();
  if (j.contains("feature")) {
    rec.feature = j["feature"].get<std::vector<float>>();
  } else if (j.contains("feature_file")) {
    fs::path p = j["feature_file"].get<std::string>();
    if (p.is_relative()) p = base / p;
    rec.feature = read_feature_file(p, dim);
  } else {
    throw DataError("record has neither feature nor feature_file");
  }
  if (rec.feature.size() != dim)
    throw DataError("feature has " + std::to_string(rec.feature.size()) + " values, expected " + std::to_string(dim));
  if (j.contains("captions") || options.require_captions) {
    if (!j.contains("captions") || !j["captions"].is_array()) throw DataError("missing captions array");
    rec.captions = j["captions"].get<std::vector<std::string>>();
    if (rec.captions.empty() && options.require_captions) throw DataError("captions list is empty");
  }
  if (j.contains("split") && j["split"].is_string()) rec.split = j["split"].get<std::string>();
  return rec;
}

void report(std::vector<LoadIssue>* issues, std::size_t line, std::string reason, bool strict,
            const std::string& path) {
  if (strict) throw DataError(path + ":" + std::to_string(line) + ": " + reason);
  if (issues) issues->push_back({line, std::move(reason)});
}

}  // namespace

std::vector<CaptionRecord> load_caption_records(const std::string& path, const LoadOptions& options,
                                                std::vector<LoadIssue>* issues) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open caption file " + path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<CaptionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_record(line, base, options));
    } catch (const json::exception& e) {
      report(issues, lineno, std::string("malformed record: ") + e.what(), options.strict, path);
    } catch (const DataError& e) {
      report(issues, lineno, e.what(), options.strict, path);
    }
  }
  return out;
}

bool passes_filter(const std::vector<std::string>& tokens, const std::unordered_set<std::string>& keep_list,
                   const FilterRules& rules) {
  if (tokens.empty()) return false;
  if (text::join(tokens).size() < rules.min_chars) return false;
  const std::size_t words = text::word_count(tokens);
  if (words < rules.min_words || words > rules.max_words) return false;
  if (keep_list.empty()) return true;
  for (const auto& t : tokens)
    if (keep_list.count(text::porter_stem(t))) return true;
  return false;
}

std::vector<StyledSentence> filter_styled(const std::vector<std::string>& lines,
                                          const std::unordered_set<std::string>& keep_list,
                                          const FilterRules& rules) {
  std::vector<StyledSentence> out;
  for (const auto& line : lines) {
    auto tokens = text::normalize(line);
    if (passes_filter(tokens, keep_list, rules)) out.push_back({std::move(tokens), Source::kStyled});
  }
  return out;
}

std::vector<StyledSentence> load_and_filter_styled(const std::string& path,
                                                   const std::unordered_set<std::string>& keep_list,
                                                   const LoadOptions& options, const FilterRules& rules,
                                                   std::vector<LoadIssue>* issues) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open styled corpus " + path);
  std::vector<StyledSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!text::valid_utf8(line)) {
      report(issues, lineno, "invalid UTF-8", options.strict, path);
      continue;
    }
    auto tokens = text::normalize(line);
    if (passes_filter(tokens, keep_list, rules)) out.push_back({std::move(tokens), Source::kStyled});
  }
  return out;
}

std::vector<KeepListEntry> build_keep_list(const std::vector<std::vector<std::string>>& descriptive,
                                           const std::unordered_set<std::string>& stopwords, std::size_t size) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<KeepListEntry> entries;
  for (const auto& sent : descriptive) {
    for (const auto& tok : sent) {
      if (text::is_punctuation(tok) || tok == text::kNumberToken || stopwords.count(tok)) continue;
      const std::string stem = text::porter_stem(tok);
      auto [it, inserted] = index.try_emplace(stem, entries.size());
      if (inserted) entries.push_back({stem, 0});
      ++entries[it->second].count;
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const KeepListEntry& a, const KeepListEntry& b) { return a.count > b.count; });
  if (entries.size() > size) entries.resize(size);
  return entries;
}

std::unordered_set<std::string> keep_set(const std::vector<KeepListEntry>& entries) {
  std::unordered_set<std::string> out;
  for (const auto& e : entries) out.insert(e.stem);
  return out;
}

std::vector<std::size_t> select_by_keyword_preference(const std::vector<StyledSentence>& sentences,
                                                      const std::vector<KeepListEntry>& keep_list,
                                                      std::size_t limit) {
  std::vector<std::size_t> idx(sentences.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (sentences.size() <= limit) return idx;

  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& e : keep_list) freq.emplace(e.stem, e.count);
  std::vector<std::size_t> score(sentences.size(), 0);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::unordered_set<std::string> seen;
    for (const auto& t : sentences[i].tokens) {
      auto stem = text::porter_stem(t);
      auto it = freq.find(stem);
      if (it != freq.end() && seen.insert(stem).second) score[i] += it->second;
    }
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  idx.resize(limit);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::unordered_set<std::string> default_stopwords() { return text::load_word_set(text::data_path("stopwords.txt")); }

}  // namespace semstyle::corpus
