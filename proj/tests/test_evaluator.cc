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

#include <algorithm>

#include "doctest.h"
#include "oracles.h"
#include "segcue/corpus.h"
#include "segcue/evaluator.h"
#include "segcue/rng.h"

using namespace segcue;

namespace {

// Boundary positions (1-based, excluding position 1) recounted from sets.
BoundaryScore recount(const std::vector<BoundaryVector>& gold, const std::vector<BoundaryVector>& pred) {
  BoundaryScore s;
  for (std::size_t u = 0; u < gold.size(); ++u)
    for (std::size_t i = 2; i <= gold[u].size(); ++i) {
      const bool g = gold[u][i - 1], p = pred[u][i - 1];
      if (g && p) ++s.true_positives;
      if (!g && p) ++s.false_positives;
      if (g && !p) ++s.false_negatives;
    }
  return s;
}

Corpus corpus_from(const std::vector<BoundaryVector>& gold) {
  Corpus c;
  c.inventory.intern("x");
  for (auto& b : gold) c.utterances.push_back(Utterance{std::vector<TokenId>(b.size(), 1), b});
  return c;
}

BoundaryVector random_flags(Rng& rng, std::size_t n) {
  BoundaryVector b(n);
  for (auto& x : b) x = rng.below(2);
  b[0] = 1;
  return b;
}

}  // namespace

TEST_CASE("hand-counted example") {
  // Gold boundaries at positions 2 and 4, predicted only at 2.
  BoundaryVector gold{1, 1, 0, 1, 0}, pred{1, 1, 0, 0, 0};
  auto s = score_utterance(gold, pred);
  CHECK(s.true_positives == 1);
  CHECK(s.false_positives == 0);
  CHECK(s.false_negatives == 1);
  CHECK(s.precision() == 1.0);
  CHECK(s.recall() == 0.5);
  CHECK(s.f1() == 2.0 / 3.0);
}

TEST_CASE("empty counts score one") {
  BoundaryScore s;
  CHECK(s.precision() == 1.0);
  CHECK(s.recall() == 1.0);
  CHECK(s.f1() == 1.0);
  CHECK(score_utterance(BoundaryVector{1}, BoundaryVector{1}).f1() == 1.0);
}

TEST_CASE("micro-averaged counts match a recount and ignore order") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<BoundaryVector> gold, pred;
    for (int u = 0; u < 1 + static_cast<int>(rng.below(8)); ++u) {
      const std::size_t n = 1 + rng.below(9);
      gold.push_back(random_flags(rng, n));
      pred.push_back(random_flags(rng, n));
    }
    Corpus c = corpus_from(gold);
    auto s = score(c, pred);
    CHECK(s == recount(gold, pred));

    std::vector<std::size_t> perm(gold.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(std::span(perm));
    std::vector<BoundaryVector> g2, p2;
    for (auto i : perm) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    CHECK(score(corpus_from(g2), p2) == s);
  }
}

TEST_CASE("a correct boundary never lowers F1, a wrong one never raises it") {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    auto gold = random_flags(rng, n);
    auto pred = random_flags(rng, n);
    const double before = score_utterance(gold, pred).f1();
    for (std::size_t k = 1; k < n; ++k) {
      if (pred[k]) continue;
      auto more = pred;
      more[k] = 1;
      const double after = score_utterance(gold, more).f1();
      if (gold[k]) CHECK(after >= before);
      else CHECK(after <= before);
    }
  }
}

TEST_CASE("length mismatches are data errors") {
  Corpus c = corpus_from({{1, 0, 1}});
  CHECK_THROWS_AS(score(c, std::vector<BoundaryVector>{{1, 0}}), DataError);
  CHECK_THROWS_AS(score(c, std::vector<BoundaryVector>{}), DataError);
}

TEST_CASE("mcnemar exact values") {
  auto r = mcnemar_test(1, 7);
  CHECK(r.exact);
  CHECK(r.p_value == 0.0703125);
  CHECK(mcnemar_test(0, 0).p_value == 1.0);
  CHECK(mcnemar_test(5, 5).p_value == 1.0);
  CHECK(mcnemar_test(0, 1).p_value == 1.0);
  CHECK(mcnemar_test(0, 10).p_value == 2.0 / 1024);
  for (long b = 0; b <= 60; b += 3)
    for (long c = 0; c + b <= 100; c += 7)
      CHECK(mcnemar_test(b, c).p_value == doctest::Approx(oracle::binomial_two_sided(b, c)).epsilon(1e-9));
}

TEST_CASE("mcnemar switches to chi-square above the exact limit") {
  CHECK(mcnemar_test(40, 60).exact);
  auto r = mcnemar_test(40, 61);
  CHECK_FALSE(r.exact);
  // (|40-61|-1)^2 / 101 = 400/101; p = erfc(sqrt(chi2/2)).
  CHECK(r.p_value == doctest::Approx(std::erfc(std::sqrt(400.0 / 101 / 2))));
  // The approximation stays close to the exact tail near the switch point.
  CHECK(r.p_value == doctest::Approx(oracle::binomial_two_sided(40, 61)).epsilon(0.1));
}

TEST_CASE("mcnemar is symmetric in its systems") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BoundaryVector> gold, a, b;
    for (int u = 0; u < 5; ++u) {
      const std::size_t n = 1 + rng.below(12);
      gold.push_back(random_flags(rng, n));
      a.push_back(random_flags(rng, n));
      b.push_back(random_flags(rng, n));
    }
    Corpus c = corpus_from(gold);
    auto ab = mcnemar(c, a, b), ba = mcnemar(c, b, a);
    CHECK(ab.p_value == ba.p_value);
    CHECK(ab.b == ba.c);
  }
}
