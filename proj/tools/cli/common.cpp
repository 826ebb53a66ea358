// SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "semstyle/errors.hpp"
#include "semstyle/text.hpp"

namespace semstyle::cli {

void add_train_options(CLI::App& app, trainer::TrainConfig& cfg, std::string& mode) {
  app.add_option("--learning-rate", cfg.learning_rate, "Adam step size")->capture_default_str();
  app.add_option("--batch-size", cfg.batch_size, "items per batch")->capture_default_str();
  app.add_option("--epochs", cfg.epochs, "maximum epochs")->capture_default_str();
  app.add_option("--patience", cfg.patience, "epochs without validation gain before stopping; 0 disables")
      ->capture_default_str();
  app.add_option("--validation-fraction", cfg.validation_fraction, "held-out fraction for early stopping")
      ->capture_default_str();
  app.add_option("--max-steps", cfg.max_steps, "cap on Adam steps; 0 is unbounded")->capture_default_str();
  app.add_option("--clip-min", cfg.clip_min, "lower gradient clip")->capture_default_str();
  app.add_option("--clip-max", cfg.clip_max, "upper gradient clip")->capture_default_str();
  app.add_option("--dropout", cfg.dropout, "dropout probability")->capture_default_str();
  app.add_option("--mode", mode, "training sources: joint, cocoonly or romonly")
      ->check(CLI::IsMember({"joint", "cocoonly", "romonly"}))
      ->capture_default_str();
  app.add_option("--term-vocab", cfg.term_vocab, "term vocabulary cap")->capture_default_str();
  app.add_option("--input-vocab", cfg.input_vocab, "encoder vocabulary cap")->capture_default_str();
  app.add_option("--output-vocab", cfg.output_vocab, "word vocabulary cap")->capture_default_str();
  app.add_option("--min-count", cfg.min_count, "minimum token count for the vocabularies")->capture_default_str();
  app.add_option("--embed-dim", cfg.embed_dim, "embedding width")->capture_default_str();
  app.add_option("--hidden-dim", cfg.hidden_dim, "recurrent state width")->capture_default_str();
  app.add_option("--feature-dim", cfg.feature_dim, "image feature width")->capture_default_str();
}

void finish_train_config(trainer::TrainConfig& cfg, const std::string& mode, const Common& common) {
  cfg.seed = common.seed;
  cfg.threads = common.threads;
  cfg.mode = trainer::parse_mode(mode);
  cfg.validate();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> out;
  if (path == "-") {
    std::string line;
    while (std::getline(std::cin, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      out.push_back(line);
    }
    return out;
  }
  return text::load_lines(path, false);
}

std::vector<std::vector<std::string>> read_sentences(const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : read_lines(path)) {
    auto tokens = text::normalize(line);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

trainer::EpochCallback epoch_printer() {
  std::cout << "epoch\ttrain_loss\tvalidation_loss\tsteps\n" << std::flush;
  return [](const trainer::EpochStats& s) {
    std::cout << s.epoch << '\t' << fixed(s.train_loss) << '\t' << fixed(s.validation_loss) << '\t' << s.steps << '\n'
              << std::flush;
  };
}

}  // namespace semstyle::cli
