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

#ifndef SEGCUE_PROBE_H_
#define SEGCUE_PROBE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segcue/common.h"
#include "segcue/corpus.h"
#include "segcue/cues.h"

namespace segcue {

struct ProbeExample {
  std::vector<double> embedding;
  bool word_final = false;
  // Phoneme spelling of the word containing the position.
  std::string word_type;
};

// Balanced, word-disjoint train/test split.
struct ProbeDataset {
  std::vector<ProbeExample> train;
  std::vector<ProbeExample> test;
  std::size_t train_types = 0;
  std::size_t test_types = 0;
};

// Flags set at positions that end a word (the next position starts one, or
// it is the last phoneme).
BoundaryVector word_final_positions(const Utterance& utterance);

// One example per phoneme position, labelled and tagged with its word type.
// Embeddings come from the tracks (positions 1..N; the closing <UB> step is
// unused).
std::vector<ProbeExample> probe_examples(const Corpus& corpus, std::span<const CueTrack> tracks);

inline constexpr double kProbeTrainTypeFraction = 0.8;

// Splits word types 80/20 by seed, then downsamples the majority label on
// each side so both labels are equally frequent.
ProbeDataset split_probe_examples(std::vector<ProbeExample> examples, std::uint64_t seed);

ProbeDataset build_probe_dataset(const Corpus& corpus, std::span<const CueTrack> tracks, std::uint64_t seed);

// Same examples with the embedding replaced by a one-hot encoding of the
// phoneme at the position: the word-final prior alone, as exposed by an
// untrained model's input embeddings.
ProbeDataset token_identity_dataset(const Corpus& corpus, std::uint64_t seed);

struct ProbeTrainingOptions {
  double learning_rate = 0.1;
  int epochs = 500;
};

class LinearProbe {
 public:
  LinearProbe() = default;
  LinearProbe(std::vector<double> weights, double bias, std::vector<double> mean, std::vector<double> scale);

  // P(word-final | embedding).
  double probability(std::span<const double> embedding) const;
  bool predict(std::span<const double> embedding) const { return probability(embedding) >= 0.5; }

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

// Mean logistic loss of (weights, bias) on the row-major `features`
// (rows x weights.size()). Gradients are written when the outputs are non-null.
double logistic_loss(std::span<const double> weights, double bias, std::span<const double> features,
                     std::span<const std::uint8_t> labels, std::vector<double>* grad_weights = nullptr,
                     double* grad_bias = nullptr);

// Full-batch gradient descent on standardized features (statistics from the
// training examples only), starting from zero weights.
LinearProbe train_probe(std::span<const ProbeExample> train, const ProbeTrainingOptions& options = {});

struct ProbeAccuracy {
  double overall = 0.0;
  double word_final = 0.0;
  double word_internal = 0.0;
  std::size_t examples = 0;
};

ProbeAccuracy probe_accuracy(const LinearProbe& probe, std::span<const ProbeExample> examples);

}  // namespace segcue

#endif  // SEGCUE_PROBE_H_
