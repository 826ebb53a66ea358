// SPDX-License-Identifier: Apache-2.0
#include "semstyle/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"
#include "semstyle/text.hpp"

namespace semstyle {

namespace {

constexpr std::string_view kPosNames[] = {"NOUN", "VERB", "ADJ",  "ADV",  "PRON",  "DET",
                                          "ADP",  "CONJ", "PART", "NUM",  "PUNCT", "OTHER"};

const char* const kStart[] = {"-START-", "-START2-"};
const char* const kEnd[] = {"-END-", "-END2-"};

std::string normalize_word(const std::string& w) {
  if (w == text::kNumberToken) return "!DIGITS";
  if (w.find('-') != std::string::npos && w.front() != '-') return "!HYPHEN";
  if (!w.empty() && std::isdigit(static_cast<unsigned char>(w.front()))) return "!DIGITS";
  return w;
}

std::string suffix(const std::string& w, std::size_t n) { return w.size() <= n ? w : w.substr(w.size() - n); }

// Context is padded with two start and two end markers.
std::vector<std::string> features(std::size_t i, const std::string& word, const std::vector<std::string>& ctx,
                                  const std::string& prev, const std::string& prev2) {
  const std::size_t c = i + 2;
  std::vector<std::string> f;
  f.reserve(16);
  f.emplace_back("bias");
  f.push_back("i suffix " + suffix(word, 3));
  f.push_back("i suffix2 " + suffix(word, 2));
  f.push_back("i pref1 " + word.substr(0, 1));
  f.push_back("i-1 tag " + prev);
  f.push_back("i-2 tag " + prev2);
  f.push_back("i tag+i-2 tag " + prev + " " + prev2);
  f.push_back("i word " + ctx[c]);
  f.push_back("i-1 tag+i word " + prev + " " + ctx[c]);
  f.push_back("i-1 word " + ctx[c - 1]);
  f.push_back("i-1 suffix " + suffix(ctx[c - 1], 3));
  f.push_back("i-2 word " + ctx[c - 2]);
  f.push_back("i+1 word " + ctx[c + 1]);
  f.push_back("i+1 suffix " + suffix(ctx[c + 1], 3));
  f.push_back("i+2 word " + ctx[c + 2]);
  return f;
}

std::vector<std::string> context_of(const std::vector<std::string>& words) {
  std::vector<std::string> ctx = {kStart[0], kStart[1]};
  for (const auto& w : words) ctx.push_back(normalize_word(w));
  ctx.emplace_back(kEnd[0]);
  ctx.emplace_back(kEnd[1]);
  return ctx;
}

}  // namespace

std::string_view pos_name(Pos p) { return kPosNames[static_cast<int>(p)]; }

Pos parse_pos(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kPosNames); ++i)
    if (kPosNames[i] == name) return static_cast<Pos>(i);
  throw DataError("unknown POS class '" + std::string(name) + "'");
}

Pos coarse_pos(std::string_view t) {
  if (t.starts_with("NN")) return Pos::kNoun;
  if (t.starts_with("VB") || t == "MD") return Pos::kVerb;
  if (t.starts_with("JJ")) return Pos::kAdj;
  if (t.starts_with("RB") || t == "WRB") return Pos::kAdv;
  if (t == "PRP" || t == "PRP$" || t == "WP" || t == "WP$" || t == "EX") return Pos::kPron;
  if (t == "DT" || t == "PDT" || t == "WDT") return Pos::kDet;
  if (t == "IN") return Pos::kAdp;
  if (t == "CC") return Pos::kConj;
  if (t == "RP" || t == "TO" || t == "POS") return Pos::kPart;
  if (t == "CD") return Pos::kNum;
  if (t == "." || t == "," || t == ":" || t == "``" || t == "''" || t == "-LRB-" || t == "-RRB-" || t == "HYPH")
    return Pos::kPunct;
  return Pos::kOther;
}

std::vector<TaggedSentence> load_tagged_corpus(const std::string& path) {
  std::vector<TaggedSentence> out;
  std::size_t lineno = 0;
  for (const auto& line : text::load_lines(path, false)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    TaggedSentence s;
    for (const auto& item : text::split_whitespace(line)) {
      auto slash = item.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == item.size())
        throw DataError(path + ":" + std::to_string(lineno) + ": malformed token '" + item + "'");
      s.words.push_back(item.substr(0, slash));
      s.tags.push_back(item.substr(slash + 1));
    }
    if (!s.words.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::string PosTagger::predict(const std::vector<std::string>& feats) const {
  std::map<std::string, double> scores;
  for (const auto& c : classes_) scores[c] = 0.0;
  for (const auto& f : feats) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (const auto& [tag, w] : it->second) scores[tag] += w;
  }
  const std::string* best = &classes_.front();
  double best_score = scores[*best];
  for (const auto& c : classes_) {
    if (scores[c] > best_score) {
      best = &c;
      best_score = scores[c];
    }
  }
  return *best;
}

std::vector<std::string> PosTagger::tag(const std::vector<std::string>& words) const {
  std::vector<std::string> tags;
  tags.reserve(words.size());
  if (words.empty()) return tags;
  const auto ctx = context_of(words);
  std::string prev = kStart[0], prev2 = kStart[1];
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string t;
    if (auto it = tagdict_.find(words[i]); it != tagdict_.end()) {
      t = it->second;
    } else {
      t = predict(features(i, words[i], ctx, prev, prev2));
    }
    tags.push_back(t);
    prev2 = prev;
    prev = t;
  }
  return tags;
}

PosTagger PosTagger::train(const std::vector<TaggedSentence>& corpus, const TrainOptions& options) {
  if (corpus.empty()) throw DataError("cannot train a tagger on an empty corpus");
  PosTagger tagger;

  // Tag dictionary for frequent, unambiguous words.
  std::map<std::string, std::map<std::string, int>> counts;
  std::set<std::string> classes;
  for (const auto& s : corpus) {
    if (s.words.size() != s.tags.size()) throw DataError("tagged sentence has mismatched word/tag counts");
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      ++counts[s.words[i]][s.tags[i]];
      classes.insert(s.tags[i]);
    }
  }
  tagger.classes_.assign(classes.begin(), classes.end());
  for (const auto& [word, tag_counts] : counts) {
    int total = 0, best = 0;
    std::string best_tag;
    for (const auto& [t, n] : tag_counts) {
      total += n;
      if (n > best) {
        best = n;
        best_tag = t;
      }
    }
    if (total >= options.dict_min_count && static_cast<double>(best) / total >= options.dict_min_ratio)
      tagger.tagdict_[word] = best_tag;
  }

  // Averaged perceptron: totals accumulate weight * time-held.
  std::unordered_map<std::string, std::unordered_map<std::string, double>> totals;
  std::unordered_map<std::string, std::unordered_map<std::string, long>> stamps;
  long instances = 0;
  auto update_feature = [&](const std::string& f, const std::string& c, double delta) {
    double& w = tagger.weights_[f][c];
    long& stamp = stamps[f][c];
    totals[f][c] += static_cast<double>(instances - stamp) * w;
    stamp = instances;
    w += delta;
  };

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(options.seed);
  for (int iter = 0; iter < options.iterations; ++iter) {
    for (std::size_t idx : order) {
      const auto& s = corpus[idx];
      const auto ctx = context_of(s.words);
      std::string prev = kStart[0], prev2 = kStart[1];
      for (std::size_t i = 0; i < s.words.size(); ++i) {
        std::string guess;
        if (auto it = tagger.tagdict_.find(s.words[i]); it != tagger.tagdict_.end()) {
          guess = it->second;
        } else {
          auto feats = features(i, s.words[i], ctx, prev, prev2);
          guess = tagger.predict(feats);
          ++instances;
          if (guess != s.tags[i]) {
            for (const auto& f : feats) {
              update_feature(f, s.tags[i], 1.0);
              update_feature(f, guess, -1.0);
            }
          }
        }
        prev2 = prev;
        prev = guess;
      }
    }
    rng.shuffle(std::span<std::size_t>(order));
  }

  // Average, dropping weights that round to zero.
  for (auto& [f, per_class] : tagger.weights_) {
    for (auto& [c, w] : per_class) {
      double total = totals[f][c] + static_cast<double>(instances - stamps[f][c]) * w;
      w = instances > 0 ? total / static_cast<double>(instances) : 0.0;
    }
  }
  for (auto it = tagger.weights_.begin(); it != tagger.weights_.end();) {
    auto& per_class = it->second;
    for (auto jt = per_class.begin(); jt != per_class.end();) {
      if (std::abs(jt->second) < 1e-9) {
        jt = per_class.erase(jt);
      } else {
        ++jt;
      }
    }
    if (per_class.empty()) {
      it = tagger.weights_.erase(it);
    } else {
      ++it;
    }
  }
  return tagger;
}

void PosTagger::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "# averaged-perceptron POS tagger\n";
  out << "classes";
  for (const auto& c : classes_) out << '\t' << c;
  out << '\n';
  std::map<std::string, std::string> dict(tagdict_.begin(), tagdict_.end());
  for (const auto& [w, t] : dict) out << "dict\t" << w << '\t' << t << '\n';
  std::map<std::string, std::map<std::string, double>> sorted;
  for (const auto& [f, per_class] : weights_) sorted[f].insert(per_class.begin(), per_class.end());
  char buf[64];
  for (const auto& [f, per_class] : sorted) {
    for (const auto& [c, w] : per_class) {
      std::snprintf(buf, sizeof buf, "%.9g", w);
      out << "w\t" << f << '\t' << c << '\t' << buf << '\n';
    }
  }
}

PosTagger PosTagger::load(const std::string& path) {
  PosTagger tagger;
  std::size_t lineno = 0;
  for (const auto& line : text::load_lines(path, false)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    auto bad = [&] { return DataError(path + ":" + std::to_string(lineno) + ": malformed tagger line"); };
    if (cols[0] == "classes") {
      tagger.classes_.assign(cols.begin() + 1, cols.end());
    } else if (cols[0] == "dict") {
      if (cols.size() != 3) throw bad();
      tagger.tagdict_[cols[1]] = cols[2];
    } else if (cols[0] == "w") {
      if (cols.size() != 4) throw bad();
      tagger.weights_[cols[1]][cols[2]] = std::stod(cols[3]);
    } else {
      throw bad();
    }
  }
  if (tagger.classes_.empty()) throw DataError(path + ": tagger model has no classes");
  std::sort(tagger.classes_.begin(), tagger.classes_.end());
  return tagger;
}

}  // namespace semstyle
