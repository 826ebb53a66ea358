// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include "semstyle/errors.hpp"
#include "semstyle/termpipe.hpp"
#include "semstyle/text.hpp"

namespace semstyle::termpipe {

FrameLexicon FrameLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open frame lexicon " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

FrameLexicon FrameLexicon::parse(std::string_view content, const std::string& origin) {
  FrameLexicon lex;
  std::string section;
  std::istringstream in{std::string(content)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto cols = text::split_whitespace(raw);
    if (cols.empty()) continue;
    auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
    if (cols.size() == 1 && cols[0].front() == '[' && cols[0].back() == ']') {
      section = cols[0].substr(1, cols[0].size() - 2);
      if (section != "threshold" && section != "lemma_frame" && section != "frame_parent" &&
          section != "frame_count")
        throw DataError(where() + "unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) throw DataError(where() + "entry outside a section");
    try {
      if (section == "threshold") {
        if (cols.size() != 1) throw DataError(where() + "threshold takes one integer");
        lex.threshold_ = std::stoi(cols[0]);
      } else {
        if (cols.size() != 2) throw DataError(where() + "expected two columns");
        if (section == "lemma_frame") {
          if (!lex.lemma_frame_.emplace(text::to_lower(cols[0]), cols[1]).second)
            throw DataError(where() + "duplicate lemma '" + cols[0] + "'");
        } else if (section == "frame_parent") {
          if (!lex.parent_.emplace(cols[0], cols[1]).second)
            throw DataError(where() + "frame '" + cols[0] + "' has two parents");
        } else {
          lex.counts_[cols[0]] = std::stol(cols[1]);
        }
      }
    } catch (const std::logic_error&) {
      throw DataError(where() + "malformed number");
    }
  }
  lex.validate(origin);
  return lex;
}

void FrameLexicon::validate(const std::string& origin) const {
  for (const auto& [start, _] : parent_) {
    std::set<std::string> seen{start};
    for (auto it = parent_.find(start); it != parent_.end(); it = parent_.find(it->second)) {
      if (!seen.insert(it->second).second)
        throw DataError(origin + ": frame hierarchy has a cycle through '" + start + "'");
    }
  }
}

bool FrameLexicon::in_vocabulary(const std::string& frame) const {
  auto it = counts_.find(frame);
  return it != counts_.end() && it->second > threshold_;
}

std::optional<std::string> FrameLexicon::parent(const std::string& frame) const {
  auto it = parent_.find(frame);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> FrameLexicon::lineage(const std::string& frame) const {
  std::vector<std::string> out{frame};
  for (auto p = parent(frame); p; p = parent(*p)) out.push_back(*p);
  return out;
}

FrameLexicon::Lookup FrameLexicon::lookup(const std::string& lemma) const {
  auto it = lemma_frame_.find(lemma);
  if (it == lemma_frame_.end()) return {Status::kUnknownLemma, {}};
  for (const auto& f : lineage(it->second))
    if (in_vocabulary(f)) return {Status::kFrame, f};
  return {Status::kFiltered, {}};
}

std::set<std::string> FrameLexicon::vocabulary() const {
  std::set<std::string> out;
  for (const auto& [f, n] : counts_)
    if (n > threshold_) out.insert(f);
  return out;
}

FrameLexicon::Lookup map_verb_to_frame(const std::string& lemma, const FrameLexicon& lex) {
  return lex.lookup(lemma);
}

const FrameLexicon& default_lexicon() {
  static const FrameLexicon lex = FrameLexicon::load(text::data_path("frames.lex"));
  return lex;
}

}  // namespace semstyle::termpipe
