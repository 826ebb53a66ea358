// SPDX-License-Identifier: Apache-2.0
#include <array>

#include "semstyle/errors.hpp"
#include "semstyle/termpipe.hpp"
#include "semstyle/text.hpp"

namespace semstyle::termpipe {

namespace {

bool ends_with(const std::string& w, std::string_view s) { return w.size() >= s.size() && w.ends_with(s); }

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// "stopp" -> "stop"; ll, ss, zz and ff stay doubled.
std::optional<std::string> undouble(const std::string& stem) {
  if (stem.size() < 3) return std::nullopt;
  char a = stem[stem.size() - 1], b = stem[stem.size() - 2];
  if (a != b || is_vowel(a) || a == 'l' || a == 's' || a == 'z' || a == 'f') return std::nullopt;
  return stem.substr(0, stem.size() - 1);
}

// Stems that lost a silent e: "mak(ing)", "bak(ed)".
bool wants_silent_e(const std::string& stem) {
  static constexpr std::array<std::string_view, 7> kEndings = {"at", "iz", "bl", "v", "dg", "nc", "ur"};
  for (auto e : kEndings)
    if (ends_with(stem, e)) return true;
  if (stem.size() >= 3) {
    char c0 = stem[stem.size() - 3], c1 = stem[stem.size() - 2], c2 = stem[stem.size() - 1];
    if (!is_vowel(c0) && is_vowel(c1) && (c2 == 'k' || c2 == 'c' || c2 == 's' || c2 == 'z')) return true;
  }
  return false;
}

}  // namespace

Lemmatizer Lemmatizer::load(const std::string& forms_path) {
  Lemmatizer lem;
  std::size_t lineno = 0;
  for (const auto& line : text::load_lines(forms_path)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = text::split_whitespace(line);
    if (cols.size() != 3)
      throw DataError(forms_path + ":" + std::to_string(lineno) + ": expected form, tag and lemma");
    lem.add(cols[0], cols[1], cols[2]);
  }
  return lem;
}

void Lemmatizer::add(const std::string& form, const std::string& key, const std::string& lemma) {
  table_[form + '\t' + key] = lemma;
  if (key == "NOUN") known_nouns_.insert(lemma);
  if (key == "VERB" || key.starts_with("VB")) known_verbs_.insert(lemma);
}

void Lemmatizer::add_known(Pos pos, const std::string& lemma) {
  if (pos == Pos::kNoun) known_nouns_.insert(lemma);
  if (pos == Pos::kVerb) known_verbs_.insert(lemma);
}

bool Lemmatizer::known(Pos pos, const std::string& w) const {
  return pos == Pos::kNoun ? known_nouns_.contains(w) : known_verbs_.contains(w);
}

std::string Lemmatizer::noun_rules(const std::string& w) const {
  if (known(Pos::kNoun, w) || w.size() < 3) return w;
  std::vector<std::string> cands;
  if (ends_with(w, "ies")) cands.push_back(w.substr(0, w.size() - 3) + "y");
  if (ends_with(w, "ves")) {
    cands.push_back(w.substr(0, w.size() - 3) + "f");
    cands.push_back(w.substr(0, w.size() - 3) + "fe");
  }
  if (ends_with(w, "es")) cands.push_back(w.substr(0, w.size() - 2));
  if (ends_with(w, "s")) cands.push_back(w.substr(0, w.size() - 1));
  for (const auto& c : cands)
    if (known(Pos::kNoun, c)) return c;

  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  for (std::string_view e : {"sses", "shes", "ches", "xes", "zes"})
    if (ends_with(w, e)) return w.substr(0, w.size() - 2);
  if (ends_with(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

std::string Lemmatizer::verb_rules(const std::string& w, std::string_view tag) const {
  if (tag == "VBG" && ends_with(w, "ing") && w.size() > 4) {
    std::string stem = w.substr(0, w.size() - 3);
    auto dd = undouble(stem);
    for (const auto& c : {stem, stem + "e", dd.value_or("")})
      if (!c.empty() && known(Pos::kVerb, c)) return c;
    if (dd) return *dd;
    return wants_silent_e(stem) ? stem + "e" : stem;
  }
  if ((tag == "VBD" || tag == "VBN") && ends_with(w, "ed") && w.size() > 3) {
    std::string stem = w.substr(0, w.size() - 2);
    auto dd = undouble(stem);
    std::string y = ends_with(w, "ied") ? w.substr(0, w.size() - 3) + "y" : "";
    for (const auto& c : {stem, w.substr(0, w.size() - 1), dd.value_or(""), y})
      if (!c.empty() && known(Pos::kVerb, c)) return c;
    if (!y.empty()) return y;
    if (dd) return *dd;
    return wants_silent_e(stem) ? stem + "e" : stem;
  }
  if (tag == "VBZ" && ends_with(w, "s") && w.size() > 2) {
    std::string y = ends_with(w, "ies") ? w.substr(0, w.size() - 3) + "y" : "";
    for (const auto& c : {w.substr(0, w.size() - 1), w.substr(0, w.size() - 2), y})
      if (!c.empty() && known(Pos::kVerb, c)) return c;
    if (!y.empty()) return y;
    for (std::string_view e : {"ches", "shes", "sses", "xes", "zes", "oes"})
      if (ends_with(w, e)) return w.substr(0, w.size() - 2);
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string Lemmatizer::lemmatize(const std::string& word, std::string_view penn_tag) const {
  const std::string w = text::to_lower(word);
  const Pos pos = coarse_pos(penn_tag);
  std::string tag(penn_tag);
  if (tag == "VBP") tag = "VB";
  if (pos == Pos::kVerb) {
    if (auto it = table_.find(w + '\t' + tag); it != table_.end()) return it->second;
    if (auto it = table_.find(w + "\tVERB"); it != table_.end()) return it->second;
    return verb_rules(w, tag);
  }
  if (pos == Pos::kNoun) {
    if (auto it = table_.find(w + "\tNOUN"); it != table_.end()) return it->second;
    if (penn_tag == "NNS" || penn_tag == "NNPS") return noun_rules(w);
    return w;
  }
  return w;
}

}  // namespace semstyle::termpipe
