// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>

#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"
#include "semstyle/styleval.hpp"

namespace semstyle::styleval {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kUnk = "<unk>";
constexpr const char* kBigramJoin = "\xC2\xA7";  // U+00A7

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }
double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

struct Problem {
  std::vector<std::vector<std::size_t>> rows;  // active feature indices
  std::vector<double> labels;                  // +1 styled, -1 descriptive
  std::size_t dim = 0;                         // weights; the bias sits at index dim
  double l2 = 1.0;

  double eval(const std::vector<double>& x, std::vector<double>& grad) const {
    grad.assign(dim + 1, 0.0);
    double f = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double z = x[dim];
      for (auto j : rows[i]) z += x[j];
      const double m = labels[i] * z;
      f += softplus(-m);
      const double g = -labels[i] * sigmoid(-m);
      for (auto j : rows[i]) grad[j] += g;
      grad[dim] += g;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      f += 0.5 * l2 * x[j] * x[j];
      grad[j] += l2 * x[j];
    }
    return f;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct LbfgsResult {
  std::vector<double> x;
  double grad_norm = 0.0;
  bool converged = false;
};

LbfgsResult minimize(const Problem& p, const ClfOptions& opt) {
  const std::size_t n = p.dim + 1;
  const std::size_t memory = 10;
  std::vector<double> x(n, 0.0), g, g_new, x_new, d(n);
  double f = p.eval(x, g);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> hist;  // (s, y)
  LbfgsResult r;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    r.grad_norm = std::sqrt(dot(g, g));
    if (r.grad_norm < opt.tolerance) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    std::vector<double> q = g;
    std::vector<double> alpha(hist.size());
    for (std::size_t k = hist.size(); k-- > 0;) {
      const auto& [s, y] = hist[k];
      alpha[k] = dot(s, q) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y[i];
    }
    double gamma = 1.0;
    if (!hist.empty()) gamma = dot(hist.back().first, hist.back().second) / dot(hist.back().second, hist.back().second);
    else gamma = 1.0 / std::max(1.0, r.grad_norm);
    for (auto& v : q) v *= gamma;
    for (std::size_t k = 0; k < hist.size(); ++k) {
      const auto& [s, y] = hist[k];
      const double beta = dot(y, q) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) q[i] += s[i] * (alpha[k] - beta);
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = -q[i];
    double slope = dot(g, d);
    if (slope >= 0) {
      hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / std::max(1.0, r.grad_norm);
      slope = dot(g, d);
    }
    // Backtracking line search (Armijo).
    double step = 1.0, f_new = 0.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x;
      for (std::size_t i = 0; i < n; ++i) x_new[i] += step * d[i];
      f_new = p.eval(x_new, g_new);
      if (f_new <= f + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    if (dot(s, y) > 1e-12) {
      hist.emplace_back(std::move(s), std::move(y));
      if (hist.size() > memory) hist.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
  }
  r.grad_norm = std::sqrt(dot(g, g));
  r.converged = r.converged || r.grad_norm < opt.tolerance;
  r.x = std::move(x);
  return r;
}

}  // namespace

std::vector<std::string> clf_features(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  auto add = [&](std::string f) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
  };
  for (const auto& t : tokens) add(t);
  for (std::size_t i = 1; i < tokens.size(); ++i) add(tokens[i - 1] + kBigramJoin + tokens[i]);
  return out;
}

std::vector<std::string> ClfModel::map_unknown(const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(known_.count(t) ? t : kUnk);
  return out;
}

ClfModel ClfModel::train(const Sentences& styled, const Sentences& descriptive, const ClfOptions& options) {
  if (styled.empty() || descriptive.empty())
    throw DataError("classifier training needs both styled and descriptive sentences");
  if (!(options.l2 > 0.0)) throw UsageError("classifier l2 strength must be positive");
  ClfModel m;
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto* set : {&styled, &descriptive})
    for (const auto& s : *set)
      for (const auto& t : s) ++freq[t];
  for (const auto& [t, c] : freq)
    if (c > options.unk_threshold) m.known_.insert(t);

  Problem p;
  p.l2 = options.l2;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> names;
  auto add_rows = [&](const Sentences& set, double label) {
    for (const auto& s : set) {
      std::vector<std::size_t> row;
      for (const auto& f : clf_features(m.map_unknown(s))) {
        auto [it, fresh] = index.emplace(f, names.size());
        if (fresh) names.push_back(f);
        row.push_back(it->second);
      }
      p.rows.push_back(std::move(row));
      p.labels.push_back(label);
    }
  };
  add_rows(styled, 1.0);
  add_rows(descriptive, -1.0);
  p.dim = names.size();

  auto r = minimize(p, options);
  for (std::size_t j = 0; j < p.dim; ++j) m.weights_[names[j]] = r.x[j];
  m.bias_ = r.x[p.dim];
  m.converged_ = r.converged;
  m.gradient_norm_ = r.grad_norm;
  return m;
}

double ClfModel::weight(const std::string& feature) const {
  auto it = weights_.find(feature);
  return it == weights_.end() ? 0.0 : it->second;
}

double ClfModel::probability(const std::vector<std::string>& tokens) const {
  double z = bias_;
  for (const auto& f : clf_features(map_unknown(tokens))) z += weight(f);
  return sigmoid(z);
}

double clf_fraction(const ClfModel& model, const Sentences& sentences) {
  if (sentences.empty()) throw DataError("classifier fraction needs at least one sentence");
  std::size_t styled = 0;
  for (const auto& s : sentences) styled += model.is_styled(s);
  return static_cast<double>(styled) / static_cast<double>(sentences.size());
}

double cross_validate(const Sentences& styled, const Sentences& descriptive, std::size_t folds, std::uint64_t seed,
                      const ClfOptions& options) {
  if (folds < 2) throw UsageError("cross-validation needs at least two folds");
  if (styled.size() < folds || descriptive.size() < folds)
    throw DataError("each class needs at least one sentence per fold");
  auto assign = [&](std::size_t n, std::uint64_t key) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto rng = Rng::derive(seed, {0xc1f, key});
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<std::size_t> fold(n);
    for (std::size_t i = 0; i < n; ++i) fold[order[i]] = i % folds;
    return fold;
  };
  const auto fs = assign(styled.size(), 1);
  const auto fd = assign(descriptive.size(), 2);
  std::size_t correct = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    Sentences tr_s, tr_d;
    for (std::size_t i = 0; i < styled.size(); ++i)
      if (fs[i] != f) tr_s.push_back(styled[i]);
    for (std::size_t i = 0; i < descriptive.size(); ++i)
      if (fd[i] != f) tr_d.push_back(descriptive[i]);
    auto m = ClfModel::train(tr_s, tr_d, options);
    for (std::size_t i = 0; i < styled.size(); ++i)
      if (fs[i] == f) correct += m.is_styled(styled[i]);
    for (std::size_t i = 0; i < descriptive.size(); ++i)
      if (fd[i] == f) correct += !m.is_styled(descriptive[i]);
  }
  return static_cast<double>(correct) / static_cast<double>(styled.size() + descriptive.size());
}

Json ClfModel::to_json() const {
  Json j;
  j["format"] = "semstyle-clf";
  j["bias"] = bias_;
  j["converged"] = converged_;
  std::vector<std::string> known(known_.begin(), known_.end());
  std::sort(known.begin(), known.end());
  j["known_tokens"] = known;
  std::vector<std::pair<std::string, double>> w(weights_.begin(), weights_.end());
  std::sort(w.begin(), w.end());
  Json weights = Json::object();
  for (const auto& [f, v] : w) weights[f] = v;
  j["weights"] = std::move(weights);
  return j;
}

ClfModel ClfModel::from_json(const Json& j) {
  ClfModel m;
  try {
    if (j.at("format") != "semstyle-clf") throw DataError("not a classifier model file");
    m.bias_ = j.at("bias").get<double>();
    m.converged_ = j.at("converged").get<bool>();
    for (const auto& t : j.at("known_tokens")) m.known_.insert(t.get<std::string>());
    for (const auto& [f, v] : j.at("weights").items()) m.weights_[f] = v.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed classifier model: ") + e.what());
  }
  return m;
}

void ClfModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json().dump() << "\n";
}

ClfModel ClfModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace semstyle::styleval
