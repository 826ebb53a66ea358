// SPDX-License-Identifier: Apache-2.0
#include "semstyle/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "semstyle/errors.hpp"
#include "semstyle/rng.hpp"

namespace semstyle::nn {

namespace {

double finite_loss(const std::function<double()>& loss) {
  const double v = loss();
  if (!std::isfinite(v)) throw NumericError("grad_check: loss is not finite");
  return v;
}

}  // namespace

GradCheckResult grad_check(const std::function<double()>& loss, const TensorRefs<double>& params,
                           const TensorRefs<double>& analytic, const GradCheckOptions& options) {
  if (!(options.epsilon > 0.0)) throw UsageError("grad_check: epsilon must be positive");
  if (params.size() != analytic.size()) throw ShapeError("grad_check: parameter/gradient count mismatch");

  finite_loss(loss);
  Rng rng(options.seed);
  GradCheckResult result;
  const double h = options.epsilon;

  for (std::size_t t = 0; t < params.size(); ++t) {
    auto& p = params[t].tensor->data;
    const auto& g = analytic[t].tensor->data;
    if (p.size() != g.size()) throw ShapeError("grad_check: shape mismatch for " + params[t].name);

    std::vector<std::size_t> coords(p.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (coords.size() > options.samples_per_tensor) {
      rng.shuffle(std::span<std::size_t>(coords));
      coords.resize(options.samples_per_tensor);
      std::sort(coords.begin(), coords.end());
    }

    for (std::size_t k : coords) {
      const double orig = p[k];
      auto at = [&](double offset) {
        p[k] = orig + offset;
        return finite_loss(loss);
      };
      double numeric;
      if (options.fourth_order) {
        const double f1 = at(h), fm1 = at(-h), f2 = at(2 * h), fm2 = at(-2 * h);
        numeric = (8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * h);
      } else {
        numeric = (at(h) - at(-h)) / (2.0 * h);
      }
      p[k] = orig;

      const double a = g[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      const double rel = std::abs(a - numeric) / denom;
      ++result.coordinates_checked;
      if (result.coordinates_checked == 1 || rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_tensor = params[t].name;
        result.worst_index = k;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  result.passed = result.max_relative_error < options.tolerance;
  return result;
}

}  // namespace semstyle::nn
