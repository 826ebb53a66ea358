// SPDX-License-Identifier: Apache-2.0
// Trains the bundled POS tagger from a word/TAG corpus.
#include <iostream>

#include "CLI11.hpp"
#include "semstyle/tagger.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Train the averaged-perceptron POS tagger"};
  std::string corpus, out;
  semstyle::PosTagger::TrainOptions opts;
  double holdout = 0.1;
  app.add_option("--corpus", corpus, "word/TAG training corpus")->required();
  app.add_option("--out", out, "model output path")->required();
  app.add_option("--iterations", opts.iterations, "training passes");
  app.add_option("--seed", opts.seed, "shuffle seed");
  app.add_option("--holdout", holdout, "fraction held out for the accuracy report");
  CLI11_PARSE(app, argc, argv);

  try {
    auto data = semstyle::load_tagged_corpus(corpus);
    std::size_t n_dev = static_cast<std::size_t>(static_cast<double>(data.size()) * holdout);
    std::vector<semstyle::TaggedSentence> dev, train;
    for (std::size_t i = 0; i < data.size(); ++i) (i % 10 == 0 && dev.size() < n_dev ? dev : train).push_back(data[i]);
    auto tagger = semstyle::PosTagger::train(train, opts);
    std::size_t right = 0, total = 0;
    for (const auto& s : dev) {
      auto tags = tagger.tag(s.words);
      for (std::size_t i = 0; i < tags.size(); ++i, ++total) right += tags[i] == s.tags[i];
    }
    if (total) std::cerr << "held-out accuracy " << static_cast<double>(right) / total << " on " << total << " tokens\n";
    semstyle::PosTagger::train(data, opts).save(out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
