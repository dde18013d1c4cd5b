// Copyright 2026 The segcue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "segcue/evaluator.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace segcue {

namespace {

void check_lengths(const Corpus& gold, std::span<const BoundaryVector> predicted, const char* what) {
  if (predicted.size() != gold.utterances.size())
    throw DataError(std::string(what) + " covers " + std::to_string(predicted.size()) + " utterances, gold has " +
                    std::to_string(gold.utterances.size()));
  for (std::size_t u = 0; u < predicted.size(); ++u)
    if (predicted[u].size() != gold.utterances[u].size())
      throw DataError(std::string(what) + ": utterance " + std::to_string(u) + " has length " +
                      std::to_string(predicted[u].size()) + ", gold has " +
                      std::to_string(gold.utterances[u].size()));
}

}  // namespace

double BoundaryScore::precision() const {
  const std::size_t d = true_positives + false_positives;
  return d == 0 ? 1.0 : static_cast<double>(true_positives) / static_cast<double>(d);
}

double BoundaryScore::recall() const {
  const std::size_t d = true_positives + false_negatives;
  return d == 0 ? 1.0 : static_cast<double>(true_positives) / static_cast<double>(d);
}

double BoundaryScore::f1() const {
  // 2PR / (P + R) written over counts, so equal ratios give identical doubles.
  const std::size_t d = 2 * true_positives + false_positives + false_negatives;
  return d == 0 ? 1.0 : static_cast<double>(2 * true_positives) / static_cast<double>(d);
}

BoundaryScore& BoundaryScore::operator+=(const BoundaryScore& other) {
  true_positives += other.true_positives;
  false_positives += other.false_positives;
  false_negatives += other.false_negatives;
  return *this;
}

BoundaryScore score_utterance(const BoundaryVector& gold, const BoundaryVector& predicted) {
  if (gold.size() != predicted.size()) throw DataError("boundary vectors differ in length");
  BoundaryScore s;
  for (std::size_t k = 1; k < gold.size(); ++k) {
    const bool g = gold[k] != 0;
    const bool p = predicted[k] != 0;
    s.true_positives += g && p;
    s.false_positives += !g && p;
    s.false_negatives += g && !p;
  }
  return s;
}

BoundaryScore score(const Corpus& gold, std::span<const BoundaryVector> predicted) {
  check_lengths(gold, predicted, "segmentation");
  BoundaryScore total;
  for (std::size_t u = 0; u < predicted.size(); ++u)
    total += score_utterance(gold.utterances[u].boundaries, predicted[u]);
  return total;
}

McNemarResult mcnemar_test(std::size_t b, std::size_t c) {
  McNemarResult r;
  r.b = b;
  r.c = c;
  const std::size_t n = b + c;
  if (n == 0) return r;
  if (n <= kMcNemarExactLimit) {
    // 2 * P(X <= min(b, c)) for X ~ Binomial(n, 1/2).
    const std::size_t k_max = std::min(b, c);
    double coefficient = 1.0;
    double tail = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
      tail += coefficient;
      coefficient = coefficient * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    r.p_value = std::min(1.0, std::ldexp(2.0 * tail, -static_cast<int>(n)));
    r.exact = true;
  } else {
    const double diff = std::abs(static_cast<double>(b) - static_cast<double>(c)) - 1.0;
    const double chi2 = std::max(diff, 0.0) * std::max(diff, 0.0) / static_cast<double>(n);
    r.p_value = std::min(1.0, std::erfc(std::sqrt(chi2 / 2.0)));
    r.exact = false;
  }
  return r;
}

McNemarResult mcnemar(const Corpus& gold, std::span<const BoundaryVector> a, std::span<const BoundaryVector> b) {
  check_lengths(gold, a, "system A");
  check_lengths(gold, b, "system B");
  std::size_t a_only = 0;
  std::size_t b_only = 0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    const auto& g = gold.utterances[u].boundaries;
    for (std::size_t k = 1; k < g.size(); ++k) {
      const bool a_right = (a[u][k] != 0) == (g[k] != 0);
      const bool b_right = (b[u][k] != 0) == (g[k] != 0);
      a_only += a_right && !b_right;
      b_only += !a_right && b_right;
    }
  }
  return mcnemar_test(a_only, b_only);
}

}  // namespace segcue
