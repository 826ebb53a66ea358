// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace semstyle::corpus {

inline constexpr std::size_t kDefaultFeatureDim = 2048;

struct CaptionRecord {
  std::string image_id;
  std::vector<float> feature;
  std::vector<std::string> captions;
  std::string split;  // passthrough, empty when absent
};

enum class Source { kDescriptive, kStyled };

struct StyledSentence {
  std::vector<std::string> tokens;  // normalized
  Source source_tag = Source::kStyled;

  std::string text() const;
};

struct LoadOptions {
  // Malformed lines abort the load instead of being skipped.
  bool strict = false;
  std::size_t feature_dim = kDefaultFeatureDim;
  // Feature-only records (for decoding) may omit "captions".
  bool require_captions = true;
};

struct LoadIssue {
  std::size_t line = 0;
  std::string reason;
};

// Caption file: one JSON object per line with "image_id", "captions" and
// either an inline "feature" array or a "feature_file" holding raw
// little-endian float32 values (relative paths resolve against the caption
// file's directory). Blank lines are ignored.
std::vector<CaptionRecord> load_caption_records(const std::string& path, const LoadOptions& options = {},
                                                std::vector<LoadIssue>* issues = nullptr);

struct FilterRules {
  std::size_t min_chars = 10;
  std::size_t min_words = 4;
  std::size_t max_words = 20;
};

// Length rules plus keep-list membership of at least one stemmed token.
bool passes_filter(const std::vector<std::string>& tokens, const std::unordered_set<std::string>& keep_list,
                   const FilterRules& rules = {});

// Reads one sentence per line, normalizes, and keeps the sentences that
// pass `passes_filter`. An empty keep_list disables the keyword rule.
std::vector<StyledSentence> load_and_filter_styled(const std::string& path,
                                                   const std::unordered_set<std::string>& keep_list,
                                                   const LoadOptions& options = {}, const FilterRules& rules = {},
                                                   std::vector<LoadIssue>* issues = nullptr);

// In-memory variant over raw lines.
std::vector<StyledSentence> filter_styled(const std::vector<std::string>& lines,
                                          const std::unordered_set<std::string>& keep_list,
                                          const FilterRules& rules = {});

struct KeepListEntry {
  std::string stem;
  std::size_t count = 0;
};

// Most frequent stemmed non-stop-words of the descriptive sentences,
// ties broken by first occurrence.
std::vector<KeepListEntry> build_keep_list(const std::vector<std::vector<std::string>>& descriptive,
                                           const std::unordered_set<std::string>& stopwords, std::size_t size = 300);

std::unordered_set<std::string> keep_set(const std::vector<KeepListEntry>& entries);

// One-time down-sampling of the styled corpus to at most `limit`
// sentences, preferring sentences whose keep-list stems are most frequent
// in the descriptive corpus. Returns indices into `sentences` in their
// original order.
std::vector<std::size_t> select_by_keyword_preference(const std::vector<StyledSentence>& sentences,
                                                      const std::vector<KeepListEntry>& keep_list,
                                                      std::size_t limit);

std::unordered_set<std::string> default_stopwords();

}  // namespace semstyle::corpus
