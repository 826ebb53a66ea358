// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "semstyle/errors.hpp"
#include "semstyle/styleval.hpp"

namespace semstyle::styleval {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kUnkId = 0;
constexpr int kEosId = 1;
constexpr int kBosId = 2;
constexpr const char* kUnk = "<unk>";
constexpr const char* kEos = "</s>";
constexpr const char* kBos = "<s>";

std::string key_of(const int* first, std::size_t n) {
  std::string k(n * sizeof(int), '\0');
  if (n) std::memcpy(k.data(), first, n * sizeof(int));
  return k;
}

std::vector<int> ids_of_key(const std::string& k) {
  std::vector<int> ids(k.size() / sizeof(int));
  if (!ids.empty()) std::memcpy(ids.data(), k.data(), k.size());
  return ids;
}

}  // namespace

double bits_per_word(const SequenceScorer& scorer, const Sentences& sentences) {
  if (sentences.empty()) throw DataError("bits per word needs at least one sentence");
  long double sum = 0.0L;
  std::size_t n = 0;
  for (const auto& s : sentences) {
    for (double lp : scorer.log2_probs(s)) {
      sum += lp;
      ++n;
    }
  }
  if (n == 0) throw DataError("no tokens to score");
  return static_cast<double>(-sum / static_cast<long double>(n));
}

std::vector<double> UniformScorer::log2_probs(const std::vector<std::string>& tokens) const {
  return std::vector<double>(tokens.size() + 1, -std::log2(static_cast<double>(size_)));
}

std::vector<double> GruLmScorer::log2_probs(const std::vector<std::string>& tokens) const {
  return lm_.model.log2_probs(lm_.words.encode(tokens));
}

NgramLm NgramLm::train(const Sentences& corpus, const NgramOptions& options) {
  if (corpus.empty()) throw DataError("n-gram model needs a non-empty corpus");
  if (options.order == 0) throw UsageError("n-gram order must be positive");
  if (!(options.discount > 0.0 && options.discount < 1.0)) throw UsageError("discount must lie in (0, 1)");

  NgramLm lm;
  lm.options_ = options;
  lm.tokens_ = {kUnk, kEos, kBos};
  std::unordered_map<std::string, std::size_t> freq;
  std::vector<std::string> order_seen;
  for (const auto& s : corpus)
    for (const auto& t : s)
      if (freq[t]++ == 0) order_seen.push_back(t);
  for (const auto& t : order_seen)
    if (freq[t] > options.unk_threshold && t != kUnk && t != kEos && t != kBos) lm.tokens_.push_back(t);
  for (std::size_t i = 0; i < lm.tokens_.size(); ++i) lm.ids_[lm.tokens_[i]] = static_cast<int>(i);
  lm.predictable_ = lm.tokens_.size() - (options.sentence_boundaries ? 1 : 2);

  const std::size_t N = options.order;
  const bool kn = options.smoothing == Smoothing::kKneserNey;
  lm.levels_.assign(N, Level{});
  std::vector<std::unordered_set<std::string>> extended(N);  // distinct (k+1)-grams for continuation counts
  for (const auto& s : corpus) {
    std::vector<int> seq;
    if (options.sentence_boundaries) seq.assign(N - 1, kBosId);
    const std::size_t first = seq.size();
    for (const auto& t : s) seq.push_back(lm.id_of(t));
    if (options.sentence_boundaries) seq.push_back(kEosId);
    for (std::size_t i = first; i < seq.size(); ++i) {
      for (std::size_t k = 1; k <= N && k <= i + 1; ++k) {
        const int* start = seq.data() + (i + 1 - k);
        if (!kn || k == N) {
          lm.levels_[k - 1].counts[key_of(start, k)] += 1.0;
        } else if (i >= k) {
          extended[k - 1].insert(key_of(start - 1, k + 1));
        }
      }
    }
  }
  if (kn)
    for (std::size_t k = 1; k < N; ++k)
      for (const auto& ext : extended[k - 1]) lm.levels_[k - 1].counts[ext.substr(sizeof(int))] += 1.0;
  lm.finalize();
  return lm;
}

void NgramLm::finalize() {
  for (auto& level : levels_) {
    level.context_total.clear();
    level.context_types.clear();
    for (const auto& [k, c] : level.counts) {
      const std::string h = k.substr(0, k.size() - sizeof(int));
      level.context_total[h] += c;
      level.context_types[h] += 1.0;
    }
  }
}

int NgramLm::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end() || it->second == kBosId) return kUnkId;
  return it->second;
}

double NgramLm::level_prob(std::size_t k, const std::vector<int>& context, int word) const {
  const bool kn = options_.smoothing == Smoothing::kKneserNey;
  if (k == 0) return kn ? 1.0 / static_cast<double>(predictable_) : 0.0;
  // context holds exactly k-1 ids
  const std::string h = key_of(context.data(), k - 1);
  const auto& level = levels_[k - 1];
  auto shorter = [&] {
    std::vector<int> c(context.begin() + (k > 1 ? 1 : 0), context.end());
    return level_prob(k - 1, c, word);
  };
  auto tot = level.context_total.find(h);
  if (tot == level.context_total.end()) return shorter();
  std::string hw = h;
  hw.append(reinterpret_cast<const char*>(&word), sizeof(int));
  auto cit = level.counts.find(hw);
  const double c = cit == level.counts.end() ? 0.0 : cit->second;
  if (!kn) return c / tot->second;
  const double D = options_.discount;
  const double types = level.context_types.at(h);
  return std::max(c - D, 0.0) / tot->second + D * types / tot->second * shorter();
}

double NgramLm::prob_ids(const std::vector<int>& context, int word) const {
  const std::size_t keep = std::min(context.size(), options_.order - 1);
  std::vector<int> ctx(context.end() - static_cast<std::ptrdiff_t>(keep), context.end());
  return level_prob(keep + 1, ctx, word);
}

double NgramLm::prob(const std::vector<std::string>& context, std::string_view word) const {
  std::vector<int> ctx;
  for (const auto& t : context) ctx.push_back(t == kBos ? kBosId : id_of(t));
  const int w = word == kEos && options_.sentence_boundaries ? kEosId : id_of(word);
  return prob_ids(ctx, w);
}

std::vector<double> NgramLm::log2_probs(const std::vector<std::string>& tokens) const {
  const std::size_t N = options_.order;
  std::vector<int> seq;
  if (options_.sentence_boundaries) seq.assign(N - 1, kBosId);
  const std::size_t first = seq.size();
  for (const auto& t : tokens) seq.push_back(id_of(t));
  if (options_.sentence_boundaries) seq.push_back(kEosId);
  std::vector<double> out;
  for (std::size_t i = first; i < seq.size(); ++i) {
    const std::size_t keep = std::min(i, N - 1);
    std::vector<int> ctx(seq.begin() + static_cast<std::ptrdiff_t>(i - keep), seq.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(std::log2(level_prob(keep + 1, ctx, seq[i])));
  }
  return out;
}

std::vector<std::string> NgramLm::predictable() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (static_cast<int>(i) == kBosId) continue;
    if (static_cast<int>(i) == kEosId && !options_.sentence_boundaries) continue;
    out.push_back(tokens_[i]);
  }
  return out;
}

Json NgramLm::to_json() const {
  Json j;
  j["format"] = "semstyle-ngram";
  j["order"] = options_.order;
  j["smoothing"] = options_.smoothing == Smoothing::kKneserNey ? "kneser-ney" : "mle";
  j["discount"] = options_.discount;
  j["sentence_boundaries"] = options_.sentence_boundaries;
  j["unk_threshold"] = options_.unk_threshold;
  j["tokens"] = tokens_;
  Json levels = Json::array();
  for (const auto& level : levels_) {
    std::vector<std::pair<std::vector<int>, double>> rows;
    for (const auto& [k, c] : level.counts) rows.emplace_back(ids_of_key(k), c);
    std::sort(rows.begin(), rows.end());
    Json arr = Json::array();
    for (const auto& [ids, c] : rows) {
      Json row = ids;
      row.push_back(c);
      arr.push_back(std::move(row));
    }
    levels.push_back(std::move(arr));
  }
  j["levels"] = std::move(levels);
  return j;
}

NgramLm NgramLm::from_json(const Json& j) {
  NgramLm lm;
  try {
    if (j.at("format") != "semstyle-ngram") throw DataError("not an n-gram model file");
    lm.options_.order = j.at("order").get<std::size_t>();
    const auto sm = j.at("smoothing").get<std::string>();
    if (sm != "kneser-ney" && sm != "mle") throw DataError("unknown smoothing '" + sm + "'");
    lm.options_.smoothing = sm == "mle" ? Smoothing::kMle : Smoothing::kKneserNey;
    lm.options_.discount = j.at("discount").get<double>();
    lm.options_.sentence_boundaries = j.at("sentence_boundaries").get<bool>();
    lm.options_.unk_threshold = j.at("unk_threshold").get<std::size_t>();
    lm.tokens_ = j.at("tokens").get<std::vector<std::string>>();
    if (lm.tokens_.size() < 3 || lm.tokens_[0] != kUnk || lm.tokens_[1] != kEos || lm.tokens_[2] != kBos)
      throw DataError("n-gram vocabulary lacks the reserved tokens");
    const auto& levels = j.at("levels");
    if (levels.size() != lm.options_.order) throw DataError("n-gram level count disagrees with the order");
    lm.levels_.assign(lm.options_.order, Level{});
    for (std::size_t k = 0; k < levels.size(); ++k) {
      for (const auto& row : levels[k]) {
        if (row.size() != k + 2) throw DataError("malformed n-gram row");
        std::vector<int> ids;
        for (std::size_t i = 0; i <= k; ++i) {
          int id = row[i].get<int>();
          if (id < 0 || static_cast<std::size_t>(id) >= lm.tokens_.size()) throw DataError("n-gram id out of range");
          ids.push_back(id);
        }
        lm.levels_[k].counts[key_of(ids.data(), ids.size())] = row[k + 1].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed n-gram model: ") + e.what());
  }
  for (std::size_t i = 0; i < lm.tokens_.size(); ++i) lm.ids_[lm.tokens_[i]] = static_cast<int>(i);
  lm.predictable_ = lm.tokens_.size() - (lm.options_.sentence_boundaries ? 1 : 2);
  lm.finalize();
  return lm;
}

void NgramLm::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json().dump() << "\n";
}

NgramLm NgramLm::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace semstyle::styleval
