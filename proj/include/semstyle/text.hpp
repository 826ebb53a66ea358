// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace semstyle::text {

// Replacement for numeric tokens.
inline constexpr std::string_view kNumberToken = "<num>";

// Lowercases, keeps only commas, full stops and apostrophes as
// punctuation, splits clitics ("n't", "'s", ...), replaces numbers by
// <num> and tokenizes. normalize(join(normalize(x))) == normalize(x).
std::vector<std::string> normalize(std::string_view raw);

std::string join(const std::vector<std::string>& tokens, char sep = ' ');
std::vector<std::string> split_whitespace(std::string_view line);

bool is_punctuation(std::string_view token);

// Number of non-punctuation tokens.
std::size_t word_count(const std::vector<std::string>& tokens);

bool valid_utf8(std::string_view s);

std::string to_lower(std::string_view s);

// Porter (1980) suffix-stripping stemmer over lowercase ASCII words.
// Non-alphabetic input is returned unchanged.
std::string porter_stem(std::string_view word);

// Word list loaded from a file with one entry per line; '#' starts a comment.
std::unordered_set<std::string> load_word_set(const std::string& path);
std::vector<std::string> load_lines(const std::string& path, bool skip_comments = true);

// Directory holding the bundled data files. SEMSTYLE_DATA_DIR in the
// environment overrides the build-time default.
std::string data_dir();
std::string data_path(std::string_view file);

}  // namespace semstyle::text
