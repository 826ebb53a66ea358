// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "common.hpp"
#include "semstyle/corpus.hpp"
#include "semstyle/errors.hpp"
#include "semstyle/gradsuite.hpp"
#include "semstyle/model_io.hpp"
#include "semstyle/possel.hpp"
#include "semstyle/styleval.hpp"
#include "semstyle/text.hpp"

namespace semstyle::cli {

namespace {

using Action = std::function<int()>;

std::string default_lexicon_path() { return text::data_path("frames.lex"); }

void print_issues(const std::string& path, const std::vector<corpus::LoadIssue>& issues) {
  for (const auto& i : issues) std::cerr << "warning: " << path << ':' << i.line << ": " << i.reason << '\n';
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
  } else {
    write_text(path, content);
  }
}

void report_training(const trainer::TrainResult& r) {
  std::cerr << "trained " << r.steps << " steps; best epoch " << r.best_epoch
            << (r.early_stopped ? " (early stop)" : "") << "; items descriptive " << r.descriptive_items
            << " styled " << r.styled_items << '\n';
}

// ------------------------------------------------------------- preprocess

Action preprocess(CLI::App& app, Common&) {
  struct Opts {
    std::string styled, captions, out;
    std::size_t keep_top = 300, limit = 0, feature_dim = corpus::kDefaultFeatureDim;
    bool strict = false;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--styled", o->styled, "styled text, one sentence per line")->required();
  app.add_option("--captions", o->captions, "caption records, one JSON object per line")->required();
  app.add_option("--keep-top", o->keep_top, "size of the keyword keep list")->capture_default_str();
  app.add_option("--limit", o->limit, "keep at most this many styled sentences; 0 keeps all")->capture_default_str();
  app.add_option("--feature-dim", o->feature_dim, "image feature width")->capture_default_str();
  app.add_flag("--strict", o->strict, "abort on the first malformed line");
  app.add_option("--out", o->out, "output directory")->required();
  return [o] {
    corpus::LoadOptions lo;
    lo.strict = o->strict;
    lo.feature_dim = o->feature_dim;
    std::vector<corpus::LoadIssue> cap_issues, sty_issues;
    auto records = corpus::load_caption_records(o->captions, lo, &cap_issues);
    print_issues(o->captions, cap_issues);
    std::vector<std::vector<std::string>> desc;
    for (const auto& r : records)
      for (const auto& c : r.captions) {
        auto t = text::normalize(c);
        if (!t.empty()) desc.push_back(std::move(t));
      }
    if (desc.empty()) throw DataError("no descriptive sentences in " + o->captions);
    auto keep = corpus::build_keep_list(desc, corpus::default_stopwords(), o->keep_top);
    auto styled = corpus::load_and_filter_styled(o->styled, corpus::keep_set(keep), lo, {}, &sty_issues);
    print_issues(o->styled, sty_issues);
    if (o->limit > 0 && styled.size() > o->limit) {
      std::vector<corpus::StyledSentence> picked;
      for (auto i : corpus::select_by_keyword_preference(styled, keep, o->limit)) picked.push_back(styled[i]);
      styled = std::move(picked);
    }
    std::vector<std::string> desc_lines, sty_lines, keep_lines;
    for (const auto& d : desc) desc_lines.push_back(text::join(d));
    for (const auto& s : styled) sty_lines.push_back(s.text());
    for (const auto& k : keep) keep_lines.push_back(k.stem + '\t' + std::to_string(k.count));
    const std::filesystem::path dir(o->out);
    write_text((dir / "descriptive.txt").string(), join_lines(desc_lines));
    write_text((dir / "styled.txt").string(), join_lines(sty_lines));
    write_text((dir / "keep_list.tsv").string(), join_lines(keep_lines));
    std::cout << "records\t" << records.size() << "\ndescriptive\t" << desc.size() << "\nstyled\t" << styled.size()
              << "\nkeep_list\t" << keep.size() << "\nskipped_lines\t" << cap_issues.size() + sty_issues.size()
              << '\n';
    return 0;
  };
}

// ------------------------------------------------------------------ terms

Action terms(CLI::App& app, Common&) {
  struct Opts {
    std::string in, out = "-", lexicon = default_lexicon_path(), mode = "frames";
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--in", o->in, "sentences, one per line; - reads stdin")->required();
  app.add_option("--lexicon", o->lexicon, "frame lexicon")->capture_default_str();
  app.add_option("--mode", o->mode, "frames, lempos or words")
      ->check(CLI::IsMember({"frames", "lempos", "words"}))
      ->capture_default_str();
  app.add_option("--out", o->out, "term file; - writes stdout")->capture_default_str();
  return [o] {
    auto lex = termpipe::FrameLexicon::load(o->lexicon);
    auto pipeline = termpipe::TermPipeline::load_default(&lex);
    termpipe::TermConfig cfg;
    cfg.mode = termpipe::parse_term_mode(o->mode);
    std::vector<std::string> out;
    for (const auto& line : read_lines(o->in)) out.push_back(pipeline.extract_terms(line, lex, cfg).str());
    emit(o->out, join_lines(out));
    return 0;
  };
}

// ------------------------------------------------------------- build-vocab

Action build_vocab(CLI::App& app, Common&) {
  struct Opts {
    std::string in, out;
    VocabOptions vo;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--in", o->in, "whitespace-tokenized lines")->required();
  app.add_option("--out", o->out, "vocabulary file")->required();
  app.add_option("--cap", o->vo.cap, "total entries including reserved ids")->capture_default_str();
  app.add_option("--min-count", o->vo.min_count, "minimum token count")->capture_default_str();
  app.add_option("--style-tokens", o->vo.style_tokens, "reserved style ids")->capture_default_str();
  return [o] {
    std::vector<std::vector<std::string>> lines;
    for (const auto& l : read_lines(o->in)) lines.push_back(text::split_whitespace(l));
    auto v = Vocabulary::build(lines, o->vo);
    v.save(o->out);
    std::cout << "size\t" << v.size() << '\n';
    return 0;
  };
}

// ---------------------------------------------------------------- training

Action train_termgen(CLI::App& app, Common& common) {
  struct Opts {
    std::string captions, out, lexicon = default_lexicon_path(), mode = "joint";
    bool strict = false;
    trainer::TrainConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--captions", o->captions, "caption records, one JSON object per line")->required();
  app.add_option("--lexicon", o->lexicon, "frame lexicon")->capture_default_str();
  app.add_flag("--strict", o->strict, "abort on the first malformed line");
  app.add_option("--out", o->out, "checkpoint path")->required();
  add_train_options(app, o->cfg, o->mode);
  return [o, &common] {
    finish_train_config(o->cfg, o->mode, common);
    corpus::LoadOptions lo;
    lo.strict = o->strict;
    lo.feature_dim = o->cfg.feature_dim;
    std::vector<corpus::LoadIssue> issues;
    auto records = corpus::load_caption_records(o->captions, lo, &issues);
    print_issues(o->captions, issues);
    auto lex = termpipe::FrameLexicon::load(o->lexicon);
    auto pipeline = termpipe::TermPipeline::load_default(&lex);
    trainer::TrainResult r;
    auto b = trainer::train_termgen(records, pipeline, lex, o->cfg, &r, epoch_printer());
    save_bundle(b, o->out);
    report_training(r);
    return 0;
  };
}

Action train_langgen(CLI::App& app, Common& common) {
  struct Opts {
    std::string descriptive, styled, out, lexicon = default_lexicon_path(), mode = "joint";
    trainer::TrainConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--descriptive", o->descriptive, "descriptive sentences, one per line");
  app.add_option("--styled", o->styled, "styled sentences, one per line");
  app.add_option("--lexicon", o->lexicon, "frame lexicon")->capture_default_str();
  app.add_option("--out", o->out, "checkpoint path")->required();
  add_train_options(app, o->cfg, o->mode);
  return [o, &common] {
    finish_train_config(o->cfg, o->mode, common);
    std::vector<std::vector<std::string>> desc, sty;
    if (!o->descriptive.empty()) desc = read_sentences(o->descriptive);
    if (!o->styled.empty()) sty = read_sentences(o->styled);
    auto lex = termpipe::FrameLexicon::load(o->lexicon);
    auto pipeline = termpipe::TermPipeline::load_default(&lex);
    trainer::TrainResult r;
    auto b = trainer::train_langgen(desc, sty, pipeline, lex, o->cfg, &r, epoch_printer());
    save_bundle(b, o->out);
    report_training(r);
    return 0;
  };
}

Action train_lm(CLI::App& app, Common& common) {
  struct Opts {
    std::string in, out, kind = "ngram", smoothing = "kn", mode = "cocoonly";
    styleval::NgramOptions ngram;
    bool no_boundaries = false;
    trainer::TrainConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--in", o->in, "training sentences, one per line")->required();
  app.add_option("--out", o->out, "model path (JSON for ngram, checkpoint for gru)")->required();
  app.add_option("--kind", o->kind, "ngram or gru")->check(CLI::IsMember({"ngram", "gru"}))->capture_default_str();
  app.add_option("--order", o->ngram.order, "n-gram order")->capture_default_str();
  app.add_option("--smoothing", o->smoothing, "kn or mle")->check(CLI::IsMember({"kn", "mle"}))->capture_default_str();
  app.add_option("--discount", o->ngram.discount, "Kneser-Ney discount")->capture_default_str();
  app.add_option("--unk-threshold", o->ngram.unk_threshold, "training counts at or below this become <unk>")
      ->capture_default_str();
  app.add_flag("--no-boundaries", o->no_boundaries, "score without sentence padding and </s>");
  add_train_options(app, o->cfg, o->mode);
  return [o, &common] {
    auto sentences = read_sentences(o->in);
    if (o->kind == "ngram") {
      o->ngram.smoothing = o->smoothing == "kn" ? styleval::Smoothing::kKneserNey : styleval::Smoothing::kMle;
      o->ngram.sentence_boundaries = !o->no_boundaries;
      auto lm = styleval::NgramLm::train(sentences, o->ngram);
      lm.save(o->out);
      std::cout << "sentences\t" << sentences.size() << "\ntrain_bits\t"
                << fixed(styleval::bits_per_word(lm, sentences)) << '\n';
      return 0;
    }
    o->mode = "cocoonly";
    finish_train_config(o->cfg, o->mode, common);
    trainer::TrainResult r;
    auto b = trainer::train_gru_lm(sentences, o->cfg, &r, epoch_printer());
    save_bundle(b, o->out);
    report_training(r);
    return 0;
  };
}

Action train_clf(CLI::App& app, Common& common) {
  struct Opts {
    std::string descriptive, styled, out;
    styleval::ClfOptions clf;
    std::size_t folds = 0;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--descriptive", o->descriptive, "descriptive sentences, one per line")->required();
  app.add_option("--styled", o->styled, "styled sentences, one per line")->required();
  app.add_option("--out", o->out, "classifier path (JSON)")->required();
  app.add_option("--l2", o->clf.l2, "L2 penalty on the weights")->capture_default_str();
  app.add_option("--tolerance", o->clf.tolerance, "gradient norm at convergence")->capture_default_str();
  app.add_option("--max-iterations", o->clf.max_iterations, "optimizer iteration cap")->capture_default_str();
  app.add_option("--folds", o->folds, "report k-fold cross-validated accuracy; 0 skips it")->capture_default_str();
  return [o, &common] {
    auto desc = read_sentences(o->descriptive);
    auto sty = read_sentences(o->styled);
    auto m = styleval::ClfModel::train(sty, desc, o->clf);
    m.save(o->out);
    std::cout << "features\t" << m.feature_count() << "\nconverged\t" << (m.converged() ? 1 : 0)
              << "\ngradient_norm\t" << m.gradient_norm() << '\n';
    if (o->folds > 0)
      std::cout << "cv_accuracy\t" << fixed(styleval::cross_validate(sty, desc, o->folds, common.seed, o->clf))
                << '\n';
    if (!m.converged()) std::cerr << "warning: classifier stopped before reaching the tolerance\n";
    return 0;
  };
}

// --------------------------------------------------------------- inference

Action caption(CLI::App& app, Common&) {
  struct Opts {
    std::string model, terms = "-", style = "styled", trace, out = "-";
    std::size_t max_len = 0;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--model", o->model, "language generator checkpoint")->required();
  app.add_option("--terms", o->terms, "space-separated terms per line; - reads stdin")->capture_default_str();
  app.add_option("--style", o->style, "desc or styled")->check(CLI::IsMember({"desc", "styled"}))->capture_default_str();
  app.add_option("--max-len", o->max_len, "word cap; 0 uses the model's setting")->capture_default_str();
  app.add_option("--trace", o->trace, "attention weights per decoder step, one row each, blank line between inputs");
  app.add_option("--out", o->out, "sentence file; - writes stdout")->capture_default_str();
  return [o] {
    auto b = load_langgen(o->model);
    const auto style = parse_style(o->style);
    const std::size_t max_len = o->max_len ? o->max_len : b.model.config().max_len;
    std::vector<std::string> sentences;
    std::ostringstream trace;
    for (const auto& line : read_lines(o->terms)) {
      auto ids = trainer::encode_terms(b.input, text::split_whitespace(line), style);
      auto g = b.model.generate_ids(ids, max_len);
      sentences.push_back(text::join(b.output.decode(g.words)));
      for (const auto& row : g.trace.weights) {
        for (std::size_t i = 0; i < row.size(); ++i) trace << (i ? "\t" : "") << fixed(row[i], 8);
        trace << '\n';
      }
      trace << '\n';
    }
    emit(o->out, join_lines(sentences));
    if (!o->trace.empty()) write_text(o->trace, trace.str());
    return 0;
  };
}

Action termgen_decode(CLI::App& app, Common&) {
  struct Opts {
    std::string model, features, out = "-";
    std::size_t max_len = 20;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--model", o->model, "term generator checkpoint")->required();
  app.add_option("--features", o->features, "records with image_id and feature or feature_file, one per line")
      ->required();
  app.add_option("--max-len", o->max_len, "term cap")->capture_default_str();
  app.add_option("--out", o->out, "image_id<TAB>terms per line; - writes stdout")->capture_default_str();
  return [o] {
    auto b = load_termgen(o->model);
    corpus::LoadOptions lo;
    lo.strict = true;
    lo.require_captions = false;
    lo.feature_dim = b.model.config().feature_dim;
    auto records = corpus::load_caption_records(o->features, lo);
    std::vector<std::string> out;
    for (const auto& r : records) out.push_back(r.image_id + '\t' + text::join(b.terms.decode(b.model.decode(r.feature, o->max_len))));
    emit(o->out, join_lines(out));
    return 0;
  };
}

// -------------------------------------------------------------- evaluation

Action evaluate(CLI::App& app, Common&) {
  struct Opts {
    std::string test, model, lm, clf, references, input_terms, report = "-", lexicon = default_lexicon_path();
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--test", o->test, "generated sentences, one per line")->required();
  app.add_option("--model", o->model, "GRU language model checkpoint for grulm_bits");
  app.add_option("--lm", o->lm, "n-gram model for lm_bits");
  app.add_option("--clf", o->clf, "style classifier for clf_fraction");
  app.add_option("--references", o->references, "reference sentences per test line, tab-separated, for term P/R");
  app.add_option("--input-terms", o->input_terms, "input terms per test line for coverage");
  app.add_option("--lexicon", o->lexicon, "frame lexicon")->capture_default_str();
  app.add_option("--report", o->report, "report path (JSON); - writes stdout")->capture_default_str();
  return [o] {
    const auto lines = read_lines(o->test);
    styleval::Sentences test;
    for (const auto& l : lines) test.push_back(text::normalize(l));
    if (test.empty()) throw DataError("no test sentences in " + o->test);
    // Load every model before scoring so a bad file fails fast.
    std::optional<GruLmBundle> grulm;
    if (!o->model.empty()) grulm = load_grulm(o->model);
    std::optional<styleval::NgramLm> lm;
    if (!o->lm.empty()) lm = styleval::NgramLm::load(o->lm);
    std::optional<styleval::ClfModel> clf;
    if (!o->clf.empty()) clf = styleval::ClfModel::load(o->clf);
    auto lex = termpipe::FrameLexicon::load(o->lexicon);
    auto pipeline = termpipe::TermPipeline::load_default(&lex);

    styleval::EvalReport report;
    report.sentences = test.size();
    styleval::Sentences nonempty;
    for (const auto& t : test)
      if (!t.empty()) nonempty.push_back(t);
    if (grulm) report.grulm_bits = styleval::bits_per_word(styleval::GruLmScorer(*grulm), nonempty);
    if (lm) report.lm_bits = styleval::bits_per_word(*lm, nonempty);
    if (clf) report.clf_fraction = styleval::clf_fraction(*clf, nonempty);
    if (!o->references.empty()) {
      auto ref_lines = read_lines(o->references);
      if (ref_lines.size() != test.size())
        throw DataError("references have " + std::to_string(ref_lines.size()) + " lines, test has " +
                        std::to_string(test.size()));
      styleval::Sentences cand;
      std::vector<styleval::Sentences> refs;
      for (std::size_t i = 0; i < test.size(); ++i) {
        cand.push_back(trainer::sentence_terms(test[i], pipeline, lex));
        styleval::Sentences r;
        std::stringstream ss(ref_lines[i]);
        std::string ref;
        while (std::getline(ss, ref, '\t'))
          if (!text::normalize(ref).empty()) r.push_back(trainer::sentence_terms(text::normalize(ref), pipeline, lex));
        refs.push_back(std::move(r));
      }
      auto pr = styleval::term_precision_recall(cand, refs);
      report.term_precision = pr.precision;
      report.term_recall = pr.recall;
    }
    if (!o->input_terms.empty()) {
      auto term_lines = read_lines(o->input_terms);
      if (term_lines.size() != test.size())
        throw DataError("input terms have " + std::to_string(term_lines.size()) + " lines, test has " +
                        std::to_string(test.size()));
      styleval::Coverage cov;
      for (std::size_t i = 0; i < test.size(); ++i)
        cov += styleval::term_coverage(text::split_whitespace(term_lines[i]), test[i], pipeline, lex);
      report.coverage_word_terms = cov.word_fraction();
      report.coverage_frame_terms = cov.frame_fraction();
    }
    report.attributes = styleval::style_attributes(nonempty, pipeline);
    report.validate();
    emit(o->report, report.to_json().dump(2) + "\n");
    return 0;
  };
}

Action retrieve(CLI::App& app, Common&) {
  struct Opts {
    std::string index, build, terms;
    std::size_t n = 1;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--index", o->index, "index directory")->required();
  app.add_option("--build", o->build, "build the index from these sentences (one per line) first");
  app.add_option("--terms", o->terms, "space-separated query words");
  app.add_option("-n", o->n, "number of results")->capture_default_str();
  return [o] {
    if (o->build.empty() && o->terms.empty()) throw UsageError("retrieve needs --build, --terms or both");
    styleval::Bm25Index index;
    if (!o->build.empty()) {
      std::vector<std::string> docs;
      for (const auto& l : read_lines(o->build))
        if (l.find_first_not_of(" \t") != std::string::npos) docs.push_back(l);
      index = styleval::Bm25Index::build(std::move(docs));
      index.save(o->index);
      std::cerr << "indexed " << index.size() << " documents\n";
    } else {
      index = styleval::Bm25Index::load(o->index);
    }
    if (!o->terms.empty()) {
      std::cout << "rank\tdoc\tscore\tsentence\n";
      std::size_t rank = 0;
      for (const auto& h : index.search(text::split_whitespace(o->terms), o->n))
        std::cout << ++rank << '\t' << h.doc << '\t' << fixed(h.score, 9) << '\t' << index.document(h.doc) << '\n';
    }
    return 0;
  };
}

// ------------------------------------------------------------------ possel

Action possel_cmd(CLI::App& app, Common& common) {
  struct Opts {
    std::string corpus, out = "-", lexicon = default_lexicon_path(), mode = "cocoonly";
    possel::DenoiseConfig denoise;
    possel::RankOptions rank;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--corpus", o->corpus, "sentences, one per line")->required();
  app.add_option("--drop", o->denoise.drop_fraction, "fraction of input words removed for training")
      ->capture_default_str();
  app.add_option("--copies", o->denoise.copies, "corrupted copies per training sentence")->capture_default_str();
  app.add_option("--budget", o->rank.budget, "fraction of words kept while ranking")->capture_default_str();
  app.add_option("--draws", o->rank.draws, "random removal draws per held-out sentence")->capture_default_str();
  app.add_option("--tie-bits", o->rank.tie_bits, "bit differences below this are ties")->capture_default_str();
  app.add_option("--lexicon", o->lexicon, "frame lexicon used by the tagger pipeline")->capture_default_str();
  app.add_option("--out", o->out, "ranking file; - writes stdout")->capture_default_str();
  add_train_options(app, o->denoise.train, o->mode);
  return [o, &common] {
    finish_train_config(o->denoise.train, "cocoonly", common);
    o->rank.seed = common.seed;
    o->rank.threads = common.threads;
    auto sentences = read_sentences(o->corpus);
    auto lex = termpipe::FrameLexicon::load(o->lexicon);
    auto pipeline = termpipe::TermPipeline::load_default(&lex);
    auto result = possel::run_possel(sentences, pipeline, o->denoise, o->rank);
    for (const auto& w : result.ranking.warnings) std::cerr << "warning: " << w << '\n';
    emit(o->out, result.ranking.to_text());
    report_training(result.training);
    return 0;
  };
}

// --------------------------------------------------------------- gradcheck

Action gradcheck(CLI::App& app, Common& common) {
  auto opt = std::make_shared<gradsuite::SuiteOptions>();
  app.add_option("--shapes", opt->shapes_per_layer, "random shapes per layer")->capture_default_str();
  app.add_option("--tolerance", opt->tolerance, "maximum relative error")->capture_default_str();
  return [opt, &common] {
    opt->seed = common.seed;
    std::cout << "layer\tshape\tmax_relative_error\tworst_tensor\tresult\n";
    bool ok = true;
    for (const auto& c : gradsuite::run(*opt)) {
      char err[32];
      std::snprintf(err, sizeof(err), "%.3e", c.max_relative_error);
      std::cout << c.layer << '\t' << c.shape << '\t' << err << '\t' << c.worst_tensor << '\t'
                << (c.passed ? "pass" : "FAIL") << '\n';
      ok = ok && c.passed;
    }
    if (!ok) throw NumericError("gradient check failed");
    return 0;
  };
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"preprocess", "normalize captions, build the keep list, filter styled text", preprocess},
      {"terms", "map sentences to semantic term sequences", terms},
      {"build-vocab", "build a capped vocabulary from tokenized lines", build_vocab},
      {"train-termgen", "train the image-to-terms generator", train_termgen},
      {"train-langgen", "train the styled terms-to-sentence generator", train_langgen},
      {"train-lm", "train an n-gram or GRU language model", train_lm},
      {"train-clf", "train the logistic-regression style classifier", train_clf},
      {"caption", "generate sentences from term sequences", caption},
      {"termgen-decode", "decode term sequences from image features", termgen_decode},
      {"evaluate", "score generated sentences and write a report", evaluate},
      {"retrieve", "build or query a BM25 sentence index", retrieve},
      {"possel", "rank word classes by importance for reconstruction", possel_cmd},
      {"gradcheck", "finite-difference check of every layer", gradcheck},
  };
  return list;
}

}  // namespace semstyle::cli
