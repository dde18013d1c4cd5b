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

#ifndef SEGCUE_ANALYSIS_H_
#define SEGCUE_ANALYSIS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segcue/corpus.h"

namespace segcue {

// Non-negative weights over phoneme ids (the <UB> entry stays zero) with an
// explicit support size for entropy normalization.
struct PhonemeDistribution {
  std::vector<double> weights;
  std::size_t support = 0;

  double total() const;
  double probability(std::size_t id) const { return weights[id] / total(); }
};

// Builds a distribution whose support is the number of non-zero weights.
PhonemeDistribution distribution_from_counts(std::vector<double> counts);

struct PositionalDistributions {
  PhonemeDistribution word_final;
  PhonemeDistribution other;
};

// Phoneme frequencies at word-final positions and at every other position.
// Throws DataError when either class is empty.
PositionalDistributions word_final_distribution(const Corpus& corpus);

// Shannon entropy (bits) divided by log2(support); 0 for a point mass, 1 for
// uniform. Requires support >= 2.
double normalized_entropy(const PhonemeDistribution& dist);

double mean_word_length(const Corpus& corpus);

// Sample Pearson correlation; equal lengths >= 3, non-zero variances.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CorpusStatistics {
  std::string name;
  std::size_t utterances = 0;
  std::size_t tokens = 0;
  std::size_t words = 0;
  double mean_word_length = 0.0;
  // Empty when the positional distribution is undefined or has support < 2.
  std::optional<double> final_normalized_entropy;
  std::optional<double> other_normalized_entropy;
};

CorpusStatistics corpus_statistics(const Corpus& corpus, std::string name);

// name,utterances,tokens,words,mean_word_length,final_normalized_entropy,other_normalized_entropy
std::string statistics_csv(std::span<const CorpusStatistics> stats);
// phoneme,word_final,other relative frequencies for one corpus.
std::string frequencies_csv(const Corpus& corpus, const PositionalDistributions& dists);
// Pearson matrix over the numeric statistics columns (needs >= 3 corpora).
std::string correlation_csv(std::span<const CorpusStatistics> stats);

}  // namespace segcue

#endif  // SEGCUE_ANALYSIS_H_
