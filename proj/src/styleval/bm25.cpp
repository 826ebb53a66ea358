// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "semstyle/errors.hpp"
#include "semstyle/styleval.hpp"
#include "semstyle/text.hpp"

namespace semstyle::styleval {

using Json = nlohmann::ordered_json;

std::vector<std::string> Bm25Index::analyze(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(text::porter_stem(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '_' || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

Bm25Index Bm25Index::build(std::vector<std::string> documents, const Bm25Options& options) {
  if (!(options.k1 >= 0.0) || !(options.b >= 0.0 && options.b <= 1.0))
    throw UsageError("BM25 needs k1 >= 0 and b in [0, 1]");
  Bm25Index idx;
  idx.options_ = options;
  idx.docs_ = std::move(documents);
  double total = 0.0;
  for (std::size_t d = 0; d < idx.docs_.size(); ++d) {
    const auto terms = analyze(idx.docs_[d]);
    idx.lengths_.push_back(terms.size());
    total += static_cast<double>(terms.size());
    std::unordered_map<std::string, std::size_t> tf;
    for (const auto& t : terms) ++tf[t];
    for (const auto& [t, n] : tf) idx.postings_[t].push_back({d, n});
  }
  idx.avg_len_ = idx.docs_.empty() ? 0.0 : total / static_cast<double>(idx.docs_.size());
  return idx;
}

double Bm25Index::idf(const std::string& term) const {
  auto it = postings_.find(term);
  const double n = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
  const double N = static_cast<double>(docs_.size());
  const double ratio = (N - n + 0.5) / (n + 0.5);
  if (options_.idf == IdfVariant::kLucene) return std::log(1.0 + ratio);
  return std::max(0.0, std::log(ratio));
}

std::vector<std::string> Bm25Index::analyzed_query(const std::vector<std::string>& words) const {
  std::vector<std::string> q;
  for (const auto& w : words)
    for (auto& t : analyze(w)) q.push_back(std::move(t));
  return q;
}

double Bm25Index::score(const std::vector<std::string>& query_words, std::size_t doc) const {
  if (doc >= docs_.size()) throw DataError("document id out of range");
  const double k1 = options_.k1, b = options_.b;
  const double norm = avg_len_ > 0 ? static_cast<double>(lengths_[doc]) / avg_len_ : 0.0;
  double s = 0.0;
  for (const auto& t : analyzed_query(query_words)) {
    auto it = postings_.find(t);
    if (it == postings_.end()) continue;
    auto p = std::find_if(it->second.begin(), it->second.end(), [&](const Posting& x) { return x.doc == doc; });
    if (p == it->second.end()) continue;
    const double tf = static_cast<double>(p->tf);
    s += idf(t) * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
  }
  return s;
}

std::vector<Bm25Hit> Bm25Index::search(const std::vector<std::string>& query_words, std::size_t n) const {
  if (docs_.empty()) throw DataError("BM25 index is empty");
  const double k1 = options_.k1, b = options_.b;
  std::unordered_map<std::size_t, double> acc;
  std::vector<std::size_t> order;
  for (const auto& t : analyzed_query(query_words)) {
    auto it = postings_.find(t);
    if (it == postings_.end()) continue;
    const double w = idf(t);
    for (const auto& p : it->second) {
      const double tf = static_cast<double>(p.tf);
      const double norm = static_cast<double>(lengths_[p.doc]) / avg_len_;
      auto [slot, fresh] = acc.emplace(p.doc, 0.0);
      if (fresh) order.push_back(p.doc);
      slot->second += w * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
    }
  }
  std::vector<Bm25Hit> hits;
  for (auto d : order) hits.push_back({d, acc[d]});
  std::sort(hits.begin(), hits.end(), [](const Bm25Hit& x, const Bm25Hit& y) {
    return x.score != y.score ? x.score > y.score : x.doc < y.doc;
  });
  if (hits.size() > n) hits.resize(n);
  return hits;
}

void Bm25Index::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/documents.txt");
    if (!out) throw DataError("cannot write index in " + dir);
    for (const auto& d : docs_) out << d << "\n";
  }
  Json j{{"format", "semstyle-bm25"},
         {"k1", options_.k1},
         {"b", options_.b},
         {"idf", options_.idf == IdfVariant::kLucene ? "lucene" : "robertson"},
         {"documents", docs_.size()}};
  std::ofstream out(dir + "/options.json");
  out << j.dump(1) << "\n";
  if (!out) throw DataError("cannot write index in " + dir);
}

Bm25Index Bm25Index::load(const std::string& dir) {
  std::ifstream in(dir + "/options.json");
  if (!in) throw DataError("no BM25 index in " + dir);
  Bm25Options o;
  std::size_t expected = 0;
  try {
    auto j = Json::parse(in);
    if (j.at("format") != "semstyle-bm25") throw DataError(dir + " is not a BM25 index");
    o.k1 = j.at("k1").get<double>();
    o.b = j.at("b").get<double>();
    o.idf = j.at("idf").get<std::string>() == "robertson" ? IdfVariant::kRobertson : IdfVariant::kLucene;
    expected = j.at("documents").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir + "/options.json: " + e.what());
  }
  auto docs = text::load_lines(dir + "/documents.txt", false);
  if (docs.size() != expected)
    throw DataError("index lists " + std::to_string(expected) + " documents, found " + std::to_string(docs.size()));
  return build(std::move(docs), o);
}

}  // namespace semstyle::styleval
