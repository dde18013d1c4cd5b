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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "segcue/analysis.h"
#include "segcue/corpus.h"
#include "segcue/rng.h"

using namespace segcue;

TEST_CASE("normalized entropy endpoints are exact") {
  for (std::size_t n : {2u, 3u, 7u, 10u, 44u}) {
    CHECK(normalized_entropy(distribution_from_counts(std::vector<double>(n, 3.0))) == 1.0);
    PhonemeDistribution point;
    point.weights.assign(n, 0.0);
    point.weights[n / 2] = 5.0;
    point.support = n;
    CHECK(normalized_entropy(point) == 0.0);
  }
  CHECK_THROWS_AS(normalized_entropy(distribution_from_counts({0.0, 4.0})), DataError);
  CHECK_THROWS_AS(distribution_from_counts({1.0, -1.0}), ArgumentError);
}

TEST_CASE("normalized entropy matches the direct formula") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(2 + rng.below(20));
    for (auto& x : w) x = 0.01 + rng.uniform();
    double s = 0, h = 0;
    for (double x : w) s += x;
    for (double x : w) h -= x / s * std::log2(x / s);
    CHECK(normalized_entropy(distribution_from_counts(w)) == doctest::Approx(h / std::log2(w.size())).epsilon(1e-12));
  }
}

TEST_CASE("pearson on exact linear data") {
  std::vector<double> x{1, 2, 3, 4, 5, 6.5};
  std::vector<double> up, down;
  for (double v : x) {
    up.push_back(3 * v + 1);
    down.push_back(-0.2 * v + 7);
  }
  CHECK(std::abs(pearson(x, up) - 1.0) < 1e-12);
  CHECK(std::abs(pearson(x, down) + 1.0) < 1e-12);
  CHECK_THROWS_AS(pearson(x, std::vector<double>(6, 1.0)), ArgumentError);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("positional distributions count word-final phonemes") {
  Corpus c = ingest("a b\tc\nb a\ta\n");
  auto d = word_final_distribution(c);
  const auto a = static_cast<std::size_t>(c.inventory.id("a")), b = static_cast<std::size_t>(c.inventory.id("b")),
             cc = static_cast<std::size_t>(c.inventory.id("c"));
  CHECK(d.word_final.weights[a] == 2.0);
  CHECK(d.word_final.weights[b] == 1.0);
  CHECK(d.word_final.weights[cc] == 1.0);
  CHECK(d.other.weights[a] == 1.0);
  CHECK(d.other.weights[b] == 1.0);
  CHECK(d.word_final.weights[0] == 0.0);
  CHECK(d.word_final.support == 3);
  CHECK(mean_word_length(c) == 6.0 / 4.0);
  CHECK_THROWS_AS(word_final_distribution(ingest("a\tb\n")), DataError);
}

TEST_CASE("statistics csv") {
  Corpus c = ingest("a b\tc\nb a\ta\n");
  auto s = corpus_statistics(c, "toy");
  CHECK(s.words == 4);
  CHECK(s.final_normalized_entropy.has_value());
  auto single = corpus_statistics(ingest("a\tb\n"), "flat");
  CHECK_FALSE(single.final_normalized_entropy.has_value());
  std::vector<CorpusStatistics> all{s, single};
  const auto csv = statistics_csv(all);
  CHECK(csv.rfind("name,utterances,tokens,words,mean_word_length,", 0) == 0);
  CHECK(csv.find("\nflat,1,2,2,1,,\n") != std::string::npos);
  CHECK_THROWS_AS(correlation_csv(all), ArgumentError);
}

TEST_CASE("correlation matrix is symmetric with a unit diagonal") {
  std::vector<CorpusStatistics> stats;
  const char* texts[] = {"a b\tc\nb a\ta\n", "a b c\td e\n", "a\tb c d e\tf g\n", "a b\tb c\tc d\n"};
  int i = 0;
  for (auto t : texts) stats.push_back(corpus_statistics(ingest(t), "c" + std::to_string(i++)));
  std::istringstream in(correlation_csv(stats));
  std::string line;
  std::getline(in, line);
  CHECK(line == "column,tokens,words,mean_word_length,final_normalized_entropy,other_normalized_entropy");
  std::vector<std::vector<std::string>> cells;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    cells.push_back(row);
  }
  REQUIRE(cells.size() == 5);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(std::stod(cells[r][r + 1]) == doctest::Approx(1.0));
    for (std::size_t k = 0; k < 3; ++k) CHECK(cells[r][k + 1] == cells[k][r + 1]);
  }
}
