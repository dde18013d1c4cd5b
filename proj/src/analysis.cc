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

#include "segcue/analysis.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "segcue/common.h"

namespace segcue {

namespace {

std::string general17(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string optional17(const std::optional<double>& x) { return x ? general17(*x) : std::string(); }

}  // namespace

double PhonemeDistribution::total() const {
  double t = 0.0;
  for (double w : weights) t += w;
  return t;
}

PhonemeDistribution distribution_from_counts(std::vector<double> counts) {
  PhonemeDistribution dist;
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ArgumentError("distribution weights must be finite and >= 0");
    if (c > 0.0) ++dist.support;
  }
  dist.weights = std::move(counts);
  return dist;
}

PositionalDistributions word_final_distribution(const Corpus& corpus) {
  std::vector<double> finals(corpus.inventory.size(), 0.0), others(corpus.inventory.size(), 0.0);
  for (const auto& utt : corpus.utterances)
    for (std::size_t k = 0; k < utt.size(); ++k) {
      const bool is_final = k + 1 == utt.size() || utt.boundaries[k + 1];
      (is_final ? finals : others)[static_cast<std::size_t>(utt.tokens[k])] += 1.0;
    }
  PositionalDistributions out{distribution_from_counts(std::move(finals)), distribution_from_counts(std::move(others))};
  if (out.word_final.support == 0) throw DataError("corpus has no word-final positions");
  if (out.other.support == 0)
    throw DataError("corpus has no word-internal positions (every word is a single phoneme)");
  return out;
}

double normalized_entropy(const PhonemeDistribution& dist) {
  if (dist.support < 2) throw DataError("normalized entropy needs a support of at least 2 (maximum entropy is 0)");
  const double total = dist.total();
  if (!(total > 0.0)) throw DataError("distribution has no mass");
  const double n = static_cast<double>(dist.support);
  // H / log2(n) = 1 - KL(p || uniform) / log2(n); exact for uniform weights.
  double divergence = 0.0;
  for (double w : dist.weights)
    if (w > 0.0) divergence += (w / total) * std::log2(n * w / total);
  return std::clamp(1.0 - divergence / std::log2(n), 0.0, 1.0);
}

double mean_word_length(const Corpus& corpus) {
  const std::size_t words = corpus.word_count();
  if (words == 0) throw DataError("corpus has no words");
  return static_cast<double>(corpus.token_count()) / static_cast<double>(words);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ArgumentError("pearson: inputs differ in length");
  if (xs.size() < 3) throw ArgumentError("pearson: need at least 3 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw ArgumentError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorpusStatistics corpus_statistics(const Corpus& corpus, std::string name) {
  CorpusStatistics s;
  s.name = std::move(name);
  s.utterances = corpus.utterances.size();
  s.tokens = corpus.token_count();
  s.words = corpus.word_count();
  s.mean_word_length = mean_word_length(corpus);
  try {
    auto dists = word_final_distribution(corpus);
    if (dists.word_final.support >= 2) s.final_normalized_entropy = normalized_entropy(dists.word_final);
    if (dists.other.support >= 2) s.other_normalized_entropy = normalized_entropy(dists.other);
  } catch (const DataError&) {
    // Single-phoneme words only: positional entropies stay undefined.
  }
  return s;
}

std::string statistics_csv(std::span<const CorpusStatistics> stats) {
  std::string out = "name,utterances,tokens,words,mean_word_length,final_normalized_entropy,other_normalized_entropy\n";
  for (const auto& s : stats)
    out += s.name + "," + std::to_string(s.utterances) + "," + std::to_string(s.tokens) + "," +
           std::to_string(s.words) + "," + general17(s.mean_word_length) + "," +
           optional17(s.final_normalized_entropy) + "," + optional17(s.other_normalized_entropy) + "\n";
  return out;
}

std::string frequencies_csv(const Corpus& corpus, const PositionalDistributions& dists) {
  std::string out = "phoneme,word_final,other\n";
  for (std::size_t id = 0; id < corpus.inventory.size(); ++id) {
    if (static_cast<TokenId>(id) == corpus.inventory.ub_id()) continue;
    out += corpus.inventory.symbol(static_cast<TokenId>(id)) + "," + general17(dists.word_final.probability(id)) +
           "," + general17(dists.other.probability(id)) + "\n";
  }
  return out;
}

std::string correlation_csv(std::span<const CorpusStatistics> stats) {
  if (stats.size() < 3) throw ArgumentError("correlations need at least 3 corpora");
  struct Column {
    const char* name;
    std::function<std::optional<double>(const CorpusStatistics&)> get;
  };
  const std::vector<Column> columns = {
      {"tokens", [](const CorpusStatistics& s) { return std::optional<double>(static_cast<double>(s.tokens)); }},
      {"words", [](const CorpusStatistics& s) { return std::optional<double>(static_cast<double>(s.words)); }},
      {"mean_word_length", [](const CorpusStatistics& s) { return std::optional<double>(s.mean_word_length); }},
      {"final_normalized_entropy", [](const CorpusStatistics& s) { return s.final_normalized_entropy; }},
      {"other_normalized_entropy", [](const CorpusStatistics& s) { return s.other_normalized_entropy; }},
  };
  std::string out = "column";
  for (const auto& c : columns) out += std::string(",") + c.name;
  out += "\n";
  for (const auto& a : columns) {
    out += a.name;
    for (const auto& b : columns) {
      std::vector<double> xs, ys;
      for (const auto& s : stats) {
        auto x = a.get(s), y = b.get(s);
        if (x && y) {
          xs.push_back(*x);
          ys.push_back(*y);
        }
      }
      out += ",";
      try {
        out += general17(pearson(xs, ys));
      } catch (const ArgumentError&) {
        // Undefined (constant column or too few points): left blank.
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace segcue
