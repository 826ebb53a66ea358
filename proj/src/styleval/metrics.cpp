// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "semstyle/errors.hpp"
#include "semstyle/styleval.hpp"
#include "semstyle/text.hpp"

namespace semstyle::styleval {

using Json = nlohmann::ordered_json;

namespace {

std::map<std::string, std::size_t> bag(const std::vector<std::string>& terms) {
  std::map<std::string, std::size_t> b;
  for (const auto& t : terms) ++b[t];
  return b;
}

std::size_t overlap(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  std::size_t n = 0;
  for (const auto& [t, c] : a) {
    auto it = b.find(t);
    if (it != b.end()) n += std::min(c, it->second);
  }
  return n;
}

const std::set<std::string>& first_person() {
  static const std::set<std::string> words = {"i",  "me", "my",   "mine", "myself",   "we",
                                              "us", "our", "ours", "ourselves"};
  return words;
}

}  // namespace

PrecisionRecall term_precision_recall(const Sentences& candidates, const std::vector<Sentences>& references) {
  if (candidates.empty()) throw DataError("term precision/recall needs at least one candidate");
  if (candidates.size() != references.size())
    throw DataError("candidates and references are not aligned (" + std::to_string(candidates.size()) + " vs " +
                    std::to_string(references.size()) + ")");
  std::size_t clipped = 0, produced = 0;
  long double recall_sum = 0.0L;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (references[i].empty()) throw DataError("candidate " + std::to_string(i) + " has no reference");
    const auto cand = bag(candidates[i]);
    std::map<std::string, std::size_t> max_ref;
    long double best_recall = 0.0L;
    for (const auto& ref : references[i]) {
      const auto rb = bag(ref);
      for (const auto& [t, c] : rb) max_ref[t] = std::max(max_ref[t], c);
      if (!ref.empty())
        best_recall = std::max(best_recall, static_cast<long double>(overlap(cand, rb)) /
                                                static_cast<long double>(ref.size()));
    }
    clipped += overlap(cand, max_ref);
    produced += candidates[i].size();
    recall_sum += best_recall;
  }
  PrecisionRecall pr;
  pr.precision = produced ? static_cast<double>(clipped) / static_cast<double>(produced) : 0.0;
  pr.recall = static_cast<double>(recall_sum / static_cast<long double>(candidates.size()));
  return pr;
}

std::optional<double> Coverage::word_fraction() const {
  if (word_terms == 0) return std::nullopt;
  return static_cast<double>(word_covered) / static_cast<double>(word_terms);
}

std::optional<double> Coverage::frame_fraction() const {
  if (frame_terms == 0) return std::nullopt;
  return static_cast<double>(frame_covered) / static_cast<double>(frame_terms);
}

Coverage& Coverage::operator+=(const Coverage& o) {
  word_terms += o.word_terms;
  word_covered += o.word_covered;
  frame_terms += o.frame_terms;
  frame_covered += o.frame_covered;
  return *this;
}

Coverage term_coverage(const std::vector<std::string>& input_terms, const std::vector<std::string>& generated,
                       const termpipe::TermPipeline& pipeline, const termpipe::FrameLexicon& lexicon) {
  const auto out = pipeline.extract_terms(text::join(generated), lexicon);
  std::set<std::string> words;
  std::set<std::string> frames;  // generated frames and all their ancestors
  for (const auto& t : out.terms) {
    if (t.is_frame()) {
      for (const auto& f : lexicon.lineage(std::get<termpipe::FrameTerm>(t.value).frame)) frames.insert(f);
    } else {
      words.insert(t.render());
    }
  }
  Coverage c;
  for (const auto& raw : input_terms) {
    const auto term = termpipe::parse_term(raw);
    if (term.is_frame()) {
      ++c.frame_terms;
      c.frame_covered += frames.count(std::get<termpipe::FrameTerm>(term.value).frame);
    } else {
      ++c.word_terms;
      c.word_covered += words.count(term.render());
    }
  }
  return c;
}

StyleAttributes style_attributes(const Sentences& sentences, const termpipe::TermPipeline& pipeline) {
  StyleAttributes a;
  a.sentences = sentences.size();
  if (sentences.empty()) return a;
  std::size_t present = 0, past = 0, first = 0;
  std::set<std::string> verbs;
  for (const auto& s : sentences) {
    bool has_present = false, has_past = false, has_first = false;
    for (const auto& tok : pipeline.tag_tokens(s)) {
      const auto& tag = tok.tag;
      if (tag == "VBG" || tag == "VBP" || tag == "VBZ") has_present = true;
      if (tag == "VBD" || tag == "VBN") has_past = true;
      if (tag.rfind("VB", 0) == 0) verbs.insert(tok.lemma);
      std::string lower = tok.surface;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
      if (first_person().count(lower)) has_first = true;
    }
    present += has_present;
    past += has_past;
    first += has_first;
  }
  const double n = static_cast<double>(sentences.size());
  a.present = static_cast<double>(present) / n;
  a.past = static_cast<double>(past) / n;
  a.first_person = static_cast<double>(first) / n;
  a.unique_verbs = verbs.size();
  return a;
}

void EvalReport::validate() const {
  auto fraction = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v >= 0.0 && *v <= 1.0)) throw NumericError(std::string(name) + " is outside [0, 1]");
  };
  auto bits = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v >= 0.0 && std::isfinite(*v))) throw NumericError(std::string(name) + " is not a finite bit count");
  };
  bits(lm_bits, "lm_bits");
  bits(grulm_bits, "grulm_bits");
  fraction(clf_fraction, "clf_fraction");
  fraction(term_precision, "term_precision");
  fraction(term_recall, "term_recall");
  fraction(coverage_word_terms, "coverage_word_terms");
  fraction(coverage_frame_terms, "coverage_frame_terms");
  if (attributes) {
    fraction(attributes->present, "present");
    fraction(attributes->past, "past");
    fraction(attributes->first_person, "first_person");
  }
}

Json EvalReport::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["sentences"] = sentences;
  j["lm_bits"] = opt(lm_bits);
  j["grulm_bits"] = opt(grulm_bits);
  j["clf_fraction"] = opt(clf_fraction);
  j["term_precision"] = opt(term_precision);
  j["term_recall"] = opt(term_recall);
  j["coverage_word_terms"] = opt(coverage_word_terms);
  j["coverage_frame_terms"] = opt(coverage_frame_terms);
  if (attributes) {
    j["style_attributes"] = Json{{"present_tense", attributes->present},
                                 {"past_tense", attributes->past},
                                 {"first_person", attributes->first_person},
                                 {"unique_verbs", attributes->unique_verbs}};
  } else {
    j["style_attributes"] = nullptr;
  }
  return j;
}

}  // namespace semstyle::styleval
