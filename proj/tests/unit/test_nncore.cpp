// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "semstyle/errors.hpp"
#include "semstyle/nn/adam.hpp"
#include "semstyle/nn/dropout.hpp"
#include "semstyle/nn/gradcheck.hpp"
#include "semstyle/nn/layers.hpp"
#include "semstyle/nn/loss.hpp"

using namespace semstyle;
using namespace semstyle::nn;

namespace {

// Loss = sum_i c_i * y_i over a fixed random projection of the output.
std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

}  // namespace

TEST_CASE("gru with zero parameters halves the previous state") {
  GruCell<float> cell(3, 4);
  std::vector<float> x = {1.f, -2.f, 0.5f};
  std::vector<float> h = {0.2f, -0.4f, 0.8f, 1.0f};
  auto out = gru_step<float>(cell, x, h);
  REQUIRE(out.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(out[i] == doctest::Approx(0.5 * h[i]));
}

TEST_CASE("gru output width equals hidden size") {
  Rng rng(1);
  GruCell<float> cell(7, 512);
  cell.init(rng);
  std::vector<float> x(7, 0.3f), h(512, 0.f);
  CHECK(gru_step<float>(cell, x, h).size() == 512);
  std::vector<float> bad(6, 0.f);
  CHECK_THROWS_AS(gru_step<float>(cell, bad, h), ShapeError);
}

TEST_CASE("gru hidden coordinates stay inside (-1, 1) from a zero state") {
  Rng rng(2);
  GruCell<double> cell(5, 6);
  cell.init(rng, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_vec(rng, 5, 3.0);
    std::vector<double> h(6, 0.0);
    for (int step = 0; step < 4; ++step) {
      h = gru_step<double>(cell, x, h);
      for (double v : h) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
      }
    }
  }
}

TEST_CASE("gru backward matches finite differences") {
  Rng rng(3);
  GruCell<double> cell(4, 5), grad(4, 5);
  cell.init(rng, 0.5);
  cell.b.fill_uniform(rng, 0.5);
  auto x0 = random_vec(rng, 4);
  auto h0 = random_vec(rng, 5, 0.9);
  auto c = random_vec(rng, 5);
  std::vector<double> x = x0, h = h0;

  auto loss = [&] {
    auto out = gru_step<double>(cell, x, h);
    return std::inner_product(out.begin(), out.end(), c.begin(), 0.0);
  };
  GruCache<double> cache;
  cell.forward(x, h, cache);
  std::vector<double> dx(4, 0.0), dh(5, 0.0);
  cell.backward(cache, c, grad, dx, dh);

  TensorRefs<double> p, g;
  cell.collect("gru", p);
  grad.collect("gru", g);
  Tensor<double> xt({4}), ht({5}), dxt({4}), dht({5});
  auto r = grad_check(loss, p, g);
  CHECK(r.passed);
  CHECK(r.max_relative_error < 1e-4);

  // Input and state gradients, checked by treating them as parameters.
  Tensor<double> xs({4}), hs({5});
  xs.data = x;
  hs.data = h;
  auto loss_xh = [&] {
    auto out = gru_step<double>(cell, xs.data, hs.data);
    return std::inner_product(out.begin(), out.end(), c.begin(), 0.0);
  };
  dxt.data = dx;
  dht.data = dh;
  auto r2 = grad_check(loss_xh, {{"x", &xs}, {"h", &hs}}, {{"x", &dxt}, {"h", &dht}});
  CHECK(r2.max_relative_error < 1e-4);
}

TEST_CASE("dense backward matches finite differences below 1e-6") {
  Rng rng(4);
  Dense<double> d(6, 3), grad(6, 3);
  d.init(rng, 1.0);
  d.bias.fill_uniform(rng, 1.0);
  auto x = random_vec(rng, 6);
  auto c = random_vec(rng, 3);
  auto loss = [&] {
    std::vector<double> y(3);
    d.forward(x, y);
    double s = 0;
    for (std::size_t i = 0; i < 3; ++i) s += c[i] * std::tanh(y[i]);
    return s;
  };
  std::vector<double> y(3), dy(3);
  d.forward(x, y);
  for (std::size_t i = 0; i < 3; ++i) dy[i] = c[i] * (1 - std::tanh(y[i]) * std::tanh(y[i]));
  d.backward(x, dy, grad, {});
  TensorRefs<double> p, g;
  d.collect("dense", p);
  grad.collect("dense", g);
  auto r = grad_check(loss, p, g);
  CHECK(r.max_relative_error < 1e-6);
}

TEST_CASE("embedding backward accumulates into the looked-up row") {
  Embedding<float> e(5, 3), g(5, 3);
  Rng rng(5);
  e.init(rng);
  std::vector<float> dy = {1.f, 2.f, 3.f};
  e.backward(2, dy, g);
  e.backward(2, dy, g);
  CHECK(g.table.row(2)[1] == doctest::Approx(4.f));
  CHECK(g.table.row(1)[1] == 0.f);
  CHECK(e.lookup(4).size() == 3);
}

TEST_CASE("softmax cross-entropy on equal logits is ln 4") {
  std::vector<double> logits(4, 0.7);
  for (std::size_t t = 0; t < 4; ++t) {
    auto r = softmax_cross_entropy<double>(logits, t);
    CHECK(r.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    for (double p : r.probs) CHECK(p == doctest::Approx(0.25));
  }
}

TEST_CASE("softmax cross-entropy saturates and stays finite") {
  std::vector<float> logits = {1000.f, 0.f, -1000.f};
  auto r = softmax_cross_entropy<float>(logits, 0);
  CHECK(r.loss < 1e-6);
  auto r2 = softmax_cross_entropy<float>(logits, 2);
  CHECK(std::isfinite(r2.loss));
  CHECK(r2.loss == doctest::Approx(2000.0));
  CHECK_THROWS_AS(softmax_cross_entropy<float>(std::vector<float>{}, 0), ShapeError);
  CHECK_THROWS_AS(softmax_cross_entropy<float>(logits, 3), ShapeError);
}

TEST_CASE("softmax outputs are a distribution") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<float> logits(1 + rng.below(40));
    for (auto& v : logits) v = static_cast<float>(rng.uniform(-30, 30));
    std::vector<float> p(logits.size());
    softmax<float>(logits, p);
    double s = 0;
    for (float v : p) {
      CHECK(v >= 0.f);
      s += v;
    }
    CHECK(std::abs(s - 1.0) < 1e-6);
  }
}

TEST_CASE("softmax cross-entropy gradient matches finite differences below 1e-5") {
  Rng rng(7);
  Tensor<double> logits({7}), grad({7});
  logits.fill_uniform(rng, 2.0);
  const std::size_t target = 3;
  auto r = softmax_cross_entropy<double>(logits.data, target);
  softmax_xent_backward<double>(r.probs, target, 1.0, grad.data);
  auto check = grad_check([&] { return softmax_cross_entropy<double>(logits.data, target).loss; },
                          {{"logits", &logits}}, {{"logits", &grad}});
  CHECK(check.max_relative_error < 1e-5);
}

TEST_CASE("adam clips gradients to [-5, 5]") {
  Tensor<float> a({1}), b({1}), ga({1}), gb({1});
  ga.data[0] = 10.f;
  gb.data[0] = 5.f;
  TensorRefs<float> pa{{"a", &a}}, pb{{"b", &b}}, gra{{"a", &ga}}, grb{{"b", &gb}};
  AdamState<float> sa(pa, {}), sb(pb, {});
  for (int i = 0; i < 3; ++i) {
    adam_update(pa, gra, sa);
    adam_update(pb, grb, sb);
  }
  CHECK(a.data[0] == b.data[0]);
  CHECK(sa.first_moment[0].data[0] == sb.first_moment[0].data[0]);
  CHECK(ga.data[0] == 10.f);
}

TEST_CASE("first adam step moves each parameter by lr against the gradient sign") {
  Tensor<double> p({4}), g({4});
  p.data = {0.5, -0.25, 1.0, 0.0};
  g.data = {0.3, -2.0, 1e-3, -4.0};
  auto before = p.data;
  TensorRefs<double> pr{{"p", &p}}, gr{{"g", &g}};
  AdamState<double> s(pr, {});
  adam_update(pr, gr, s);
  for (std::size_t i = 0; i < 4; ++i) {
    double expected = before[i] - 0.001 * (g.data[i] > 0 ? 1.0 : -1.0);
    CHECK(p.data[i] == doctest::Approx(expected).epsilon(1e-5));
  }
  CHECK(s.step == 1);
}

TEST_CASE("adam with zero gradient leaves parameters bitwise unchanged") {
  Rng rng(8);
  Tensor<float> p({3, 4}), g({3, 4});
  p.fill_uniform(rng, 1.0);
  auto before = p.data;
  TensorRefs<float> pr{{"p", &p}}, gr{{"g", &g}};
  AdamState<float> s(pr, {});
  for (int i = 0; i < 5; ++i) adam_update(pr, gr, s);
  CHECK(p.data == before);
  CHECK(s.step == 5);
}

TEST_CASE("adam rejects mismatched shapes") {
  Tensor<float> p({3}), g({4});
  TensorRefs<float> pr{{"p", &p}}, gr{{"g", &g}};
  AdamState<float> s(pr, {});
  CHECK_THROWS_AS(adam_update(pr, gr, s), ShapeError);
}

TEST_CASE("dropout contracts") {
  Rng rng(9);
  std::vector<float> x(100, 2.f);
  auto y = x;
  dropout<float>(y, 0.0, rng, true);
  CHECK(y == x);
  y = x;
  dropout<float>(y, 0.9, rng, false);
  CHECK(y == x);
  CHECK_THROWS_AS(dropout<float>(y, 1.0, rng, true), UsageError);
  CHECK_THROWS_AS(dropout<float>(y, -0.1, rng, true), UsageError);
}

TEST_CASE("inverted dropout preserves the mean") {
  Rng rng(10);
  std::vector<double> x(100000, 3.0);
  dropout<double>(x, 0.5, rng, true);
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  CHECK(std::abs(mean - 3.0) / 3.0 < 0.02);
  for (double v : x) CHECK((v == 0.0 || v == doctest::Approx(6.0)));
}

TEST_CASE("grad check flags a gradient scaled by 1.01") {
  Rng rng(11);
  Dense<double> d(5, 4), grad(5, 4);
  d.init(rng, 1.0);
  auto x = random_vec(rng, 5);
  auto c = random_vec(rng, 4);
  auto loss = [&] {
    std::vector<double> y(4);
    d.forward(x, y);
    return std::inner_product(y.begin(), y.end(), c.begin(), 0.0);
  };
  d.backward(x, c, grad, {});
  for (auto& v : grad.weight.data) v *= 1.01;
  for (auto& v : grad.bias.data) v *= 1.01;
  TensorRefs<double> p, g;
  d.collect("dense", p);
  grad.collect("dense", g);
  auto r = grad_check(loss, p, g);
  CHECK_FALSE(r.passed);
  // |1.01a - a| / max(|1.01a|, |a|) = 0.01 / 1.01
  CHECK(r.max_relative_error == doctest::Approx(0.01 / 1.01).epsilon(1e-4));
}

TEST_CASE("grad check rejects a non-finite loss") {
  Tensor<double> p({2}), g({2});
  CHECK_THROWS_AS(grad_check([] { return std::nan(""); }, {{"p", &p}}, {{"p", &g}}), NumericError);
}
