// SPDX-License-Identifier: Apache-2.0
#include "semstyle/termpipe.hpp"

#include <algorithm>

#include "semstyle/errors.hpp"
#include "semstyle/text.hpp"

namespace semstyle::termpipe {

namespace {

constexpr std::string_view kFrameSuffix = "_FRAME";

}  // namespace

TermMode parse_term_mode(std::string_view name) {
  if (name == "frames") return TermMode::kFrames;
  if (name == "lempos") return TermMode::kLempos;
  if (name == "words") return TermMode::kWords;
  throw UsageError("unknown term mode '" + std::string(name) + "' (expected frames, lempos or words)");
}

std::string SemanticTerm::render() const {
  if (const auto* f = std::get_if<FrameTerm>(&value)) return f->frame + std::string(kFrameSuffix);
  const auto& w = std::get<WordTerm>(value);
  if (w.surface_only) return w.lemma;
  return w.lemma + "_" + std::string(pos_name(w.pos));
}

SemanticTerm parse_term(std::string_view s) {
  SemanticTerm t;
  if (s.size() > kFrameSuffix.size() && s.ends_with(kFrameSuffix)) {
    t.value = FrameTerm{std::string(s.substr(0, s.size() - kFrameSuffix.size()))};
    return t;
  }
  auto us = s.rfind('_');
  if (us != std::string_view::npos && us > 0) {
    auto suffix = s.substr(us + 1);
    for (Pos p : kAllPos) {
      if (pos_name(p) == suffix) {
        t.value = WordTerm{std::string(s.substr(0, us)), p, false};
        return t;
      }
    }
  }
  t.value = WordTerm{std::string(s), Pos::kOther, true};
  return t;
}

std::vector<std::string> TermSequence::rendered() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.render());
  return out;
}

std::string TermSequence::str() const { return text::join(rendered()); }

std::vector<Phrase> load_collocations(const std::string& path) {
  std::vector<Phrase> out;
  for (const auto& line : text::load_lines(path)) {
    auto words = text::split_whitespace(text::to_lower(line));
    if (words.size() >= 2) out.push_back(std::move(words));
  }
  return out;
}

std::vector<Token> merge_collocations(const std::vector<Token>& tokens, const std::vector<Phrase>& collocations) {
  std::vector<const Phrase*> by_length;
  for (const auto& p : collocations)
    if (!p.empty()) by_length.push_back(&p);
  std::stable_sort(by_length.begin(), by_length.end(),
                   [](const Phrase* a, const Phrase* b) { return a->size() > b->size(); });

  std::vector<Token> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Phrase* hit = nullptr;
    for (const Phrase* p : by_length) {
      if (i + p->size() > tokens.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < p->size() && ok; ++k) {
        const Token& t = tokens[i + k];
        ok = t.surface == (*p)[k] || t.lemma == (*p)[k];
      }
      if (ok) {
        hit = p;
        break;
      }
    }
    if (!hit) {
      out.push_back(tokens[i++]);
      continue;
    }
    Token merged;
    std::vector<std::string> surfaces;
    for (std::size_t k = 0; k < hit->size(); ++k) surfaces.push_back(tokens[i + k].surface);
    merged.surface = text::join(surfaces, '_');
    merged.lemma = text::join(*hit, '_');
    merged.tag = "NN";
    merged.pos = Pos::kNoun;
    merged.position = tokens[i].position;
    out.push_back(std::move(merged));
    i += hit->size();
  }
  return out;
}

TermPipeline::TermPipeline(PosTagger tagger, Lemmatizer lemmatizer, std::vector<Phrase> collocations,
                           std::unordered_set<std::string> stopwords)
    : tagger_(std::move(tagger)),
      lemmatizer_(std::move(lemmatizer)),
      collocations_(std::move(collocations)),
      stopwords_(std::move(stopwords)) {}

TermPipeline TermPipeline::load_default(const FrameLexicon* lex) {
  auto tagger = PosTagger::load(text::data_path("tagger.model"));
  auto lemmatizer = Lemmatizer::load(text::data_path("lemma_forms.txt"));
  if (lex) {
    for (const auto& [lemma, _] : lex->lemma_to_frame()) lemmatizer.add_known(Pos::kVerb, lemma);
  }
  auto stop = text::load_word_set(text::data_path("stopwords.txt"));
  auto extra = text::load_word_set(text::data_path("extra_stopwords.txt"));
  stop.insert(extra.begin(), extra.end());
  return TermPipeline(std::move(tagger), std::move(lemmatizer),
                      load_collocations(text::data_path("collocations.txt")), std::move(stop));
}

const TermPipeline& TermPipeline::shared() {
  static const TermPipeline pipeline = load_default(&default_lexicon());
  return pipeline;
}

std::vector<Token> TermPipeline::tag_tokens(const std::vector<std::string>& tokens) const {
  const auto tags = tagger_.tag(tokens);
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token t;
    t.surface = tokens[i];
    t.tag = tags[i];
    if (text::is_punctuation(t.surface)) {
      t.tag = t.surface == "," ? "," : ".";
    } else if (t.surface == text::kNumberToken) {
      t.tag = "CD";
    }
    t.pos = coarse_pos(t.tag);
    t.lemma = lemmatizer_.lemmatize(t.surface, t.tag);
    t.position = i;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Token> TermPipeline::preprocess_sentence(std::string_view raw) const {
  return tag_tokens(text::normalize(raw));
}

bool TermPipeline::is_stopword(const Token& t) const {
  return stopwords_.contains(t.surface) || stopwords_.contains(t.lemma);
}

TermSequence TermPipeline::extract_terms(std::string_view raw, const FrameLexicon& lex, const TermConfig& cfg) const {
  TermSequence seq;
  const auto tokens = preprocess_sentence(raw);
  for (const auto& t : tokens)
    if (t.pos != Pos::kPunct) ++seq.source_len;

  for (const auto& t : merge_collocations(tokens, collocations_)) {
    if (cfg.filtered_pos.contains(t.pos) || t.pos == Pos::kPunct) continue;
    if (cfg.filter_stopwords && is_stopword(t)) continue;
    SemanticTerm term;
    term.position = t.position;
    if (cfg.mode == TermMode::kWords) {
      term.value = WordTerm{t.surface, t.pos, true};
    } else if (t.pos == Pos::kVerb && cfg.mode == TermMode::kFrames) {
      auto hit = map_verb_to_frame(t.lemma, lex);
      if (hit.status == FrameLexicon::Status::kFiltered) continue;
      if (hit.status == FrameLexicon::Status::kFrame) {
        term.value = FrameTerm{hit.frame};
      } else {
        term.value = WordTerm{t.lemma, Pos::kVerb, false};
      }
    } else {
      term.value = WordTerm{t.lemma, t.pos, false};
    }
    seq.terms.push_back(std::move(term));
  }
  return seq;
}

}  // namespace semstyle::termpipe
