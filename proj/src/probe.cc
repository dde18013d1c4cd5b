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

#include "segcue/probe.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "segcue/rng.h"

namespace segcue {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

template <typename Fn>
void for_each_word(const Utterance& utt, const PhonemeInventory& inventory, Fn fn) {
  std::size_t start = 0;
  for (std::size_t k = 1; k <= utt.size(); ++k) {
    if (k == utt.size() || utt.boundaries[k]) {
      std::string type;
      for (std::size_t j = start; j < k; ++j) {
        if (j > start) type += ' ';
        type += inventory.symbol(utt.tokens[j]);
      }
      fn(start, k, type);
      start = k;
    }
  }
}

std::vector<ProbeExample> balance(std::vector<ProbeExample> examples, Rng& rng, const char* side) {
  std::vector<std::size_t> finals, internals;
  for (std::size_t i = 0; i < examples.size(); ++i) (examples[i].word_final ? finals : internals).push_back(i);
  if (finals.empty() || internals.empty())
    throw DataError(std::string("probe ") + side + " split has no " + (finals.empty() ? "word-final" : "word-internal") +
                    " positions");
  auto& larger = finals.size() > internals.size() ? finals : internals;
  const std::size_t keep = std::min(finals.size(), internals.size());
  rng.shuffle(std::span(larger));
  larger.resize(keep);

  std::vector<std::size_t> kept(finals);
  kept.insert(kept.end(), internals.begin(), internals.end());
  std::sort(kept.begin(), kept.end());
  std::vector<ProbeExample> out;
  out.reserve(kept.size());
  for (std::size_t i : kept) out.push_back(std::move(examples[i]));
  return out;
}

}  // namespace

BoundaryVector word_final_positions(const Utterance& utterance) {
  BoundaryVector out(utterance.size(), 0);
  for (std::size_t k = 0; k < utterance.size(); ++k)
    out[k] = (k + 1 == utterance.size() || utterance.boundaries[k + 1]) ? 1 : 0;
  return out;
}

std::vector<ProbeExample> probe_examples(const Corpus& corpus, std::span<const CueTrack> tracks) {
  if (tracks.size() != corpus.utterances.size()) throw DataError("probe: one track per utterance required");
  std::vector<ProbeExample> examples;
  examples.reserve(corpus.token_count());
  for (std::size_t u = 0; u < tracks.size(); ++u) {
    const auto& utt = corpus.utterances[u];
    if (tracks[u].embeddings.size() < utt.size())
      throw DataError("probe: utterance " + std::to_string(u) + " lacks embeddings");
    for_each_word(utt, corpus.inventory, [&](std::size_t begin, std::size_t end, const std::string& type) {
      for (std::size_t k = begin; k < end; ++k)
        examples.push_back(ProbeExample{tracks[u].embeddings[k], k + 1 == end, type});
    });
  }
  return examples;
}

ProbeDataset split_probe_examples(std::vector<ProbeExample> examples, std::uint64_t seed) {
  std::set<std::string> type_set;
  for (const auto& e : examples) type_set.insert(e.word_type);
  if (type_set.size() < 2) throw DataError("probe needs at least two word types");

  std::vector<std::string> types(type_set.begin(), type_set.end());
  Rng rng(mix_seed(seed, 0x70726f6265ULL));
  rng.shuffle(std::span(types));
  const auto n_types = types.size();
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(kProbeTrainTypeFraction * static_cast<double>(n_types) + 0.5)), 1,
      n_types - 1);
  const std::set<std::string> train_types(types.begin(), types.begin() + static_cast<std::ptrdiff_t>(n_train));

  std::vector<ProbeExample> train, test;
  for (auto& e : examples) (train_types.count(e.word_type) ? train : test).push_back(std::move(e));

  ProbeDataset dataset;
  dataset.train = balance(std::move(train), rng, "train");
  dataset.test = balance(std::move(test), rng, "test");
  dataset.train_types = n_train;
  dataset.test_types = n_types - n_train;
  return dataset;
}

ProbeDataset build_probe_dataset(const Corpus& corpus, std::span<const CueTrack> tracks, std::uint64_t seed) {
  return split_probe_examples(probe_examples(corpus, tracks), seed);
}

ProbeDataset token_identity_dataset(const Corpus& corpus, std::uint64_t seed) {
  std::vector<ProbeExample> examples;
  examples.reserve(corpus.token_count());
  for (const auto& utt : corpus.utterances) {
    for_each_word(utt, corpus.inventory, [&](std::size_t begin, std::size_t end, const std::string& type) {
      for (std::size_t k = begin; k < end; ++k) {
        std::vector<double> one_hot(corpus.inventory.size(), 0.0);
        one_hot[static_cast<std::size_t>(utt.tokens[k])] = 1.0;
        examples.push_back(ProbeExample{std::move(one_hot), k + 1 == end, type});
      }
    });
  }
  return split_probe_examples(std::move(examples), seed);
}

LinearProbe::LinearProbe(std::vector<double> weights, double bias, std::vector<double> mean,
                         std::vector<double> scale)
    : weights_(std::move(weights)), bias_(bias), mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != weights_.size() || scale_.size() != weights_.size())
    throw ArgumentError("probe parameter dimensions differ");
}

double LinearProbe::probability(std::span<const double> embedding) const {
  if (embedding.size() != weights_.size())
    throw DataError("embedding dimension " + std::to_string(embedding.size()) + " differs from probe dimension " +
                    std::to_string(weights_.size()));
  double z = bias_;
  for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * (embedding[j] - mean_[j]) / scale_[j];
  return sigmoid(z);
}

double logistic_loss(std::span<const double> weights, double bias, std::span<const double> features,
                     std::span<const std::uint8_t> labels, std::vector<double>* grad_weights, double* grad_bias) {
  const std::size_t d = weights.size();
  const std::size_t n = labels.size();
  if (n == 0 || features.size() != n * d) throw ArgumentError("logistic loss: feature matrix shape mismatch");
  if (grad_weights) grad_weights->assign(d, 0.0);
  double gb = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = features.data() + i * d;
    double z = bias;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * x[j];
    const double y = labels[i] ? 1.0 : 0.0;
    loss += softplus(z) - y * z;
    const double residual = sigmoid(z) - y;
    gb += residual;
    if (grad_weights)
      for (std::size_t j = 0; j < d; ++j) (*grad_weights)[j] += residual * x[j];
  }
  const double inv = 1.0 / static_cast<double>(n);
  if (grad_weights)
    for (double& g : *grad_weights) g *= inv;
  if (grad_bias) *grad_bias = gb * inv;
  return loss * inv;
}

LinearProbe train_probe(std::span<const ProbeExample> train, const ProbeTrainingOptions& options) {
  if (train.empty()) throw DataError("probe training set is empty");
  const std::size_t d = train.front().embedding.size();
  if (d == 0) throw DataError("probe embeddings are empty");
  const std::size_t n = train.size();

  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (const auto& e : train) {
    if (e.embedding.size() != d) throw DataError("probe embeddings differ in dimension");
    for (std::size_t j = 0; j < d; ++j) mean[j] += e.embedding[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const auto& e : train)
    for (std::size_t j = 0; j < d; ++j) scale[j] += (e.embedding[j] - mean[j]) * (e.embedding[j] - mean[j]);
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) s = 1.0;  // constant feature
  }

  std::vector<double> features(n * d);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) features[i * d + j] = (train[i].embedding[j] - mean[j]) / scale[j];
    labels[i] = train[i].word_final ? 1 : 0;
  }

  std::vector<double> weights(d, 0.0), grad;
  double bias = 0.0, grad_bias = 0.0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double loss = logistic_loss(weights, bias, features, labels, &grad, &grad_bias);
    if (!std::isfinite(loss)) throw DataError("probe training diverged at epoch " + std::to_string(epoch));
    for (std::size_t j = 0; j < d; ++j) weights[j] -= options.learning_rate * grad[j];
    bias -= options.learning_rate * grad_bias;
  }
  return LinearProbe(std::move(weights), bias, std::move(mean), std::move(scale));
}

ProbeAccuracy probe_accuracy(const LinearProbe& probe, std::span<const ProbeExample> examples) {
  std::size_t correct = 0, finals = 0, finals_correct = 0, internals_correct = 0;
  for (const auto& e : examples) {
    const bool right = probe.predict(e.embedding) == e.word_final;
    correct += right;
    if (e.word_final) {
      ++finals;
      finals_correct += right;
    } else {
      internals_correct += right;
    }
  }
  ProbeAccuracy acc;
  acc.examples = examples.size();
  const std::size_t internals = examples.size() - finals;
  if (!examples.empty()) acc.overall = static_cast<double>(correct) / static_cast<double>(examples.size());
  if (finals) acc.word_final = static_cast<double>(finals_correct) / static_cast<double>(finals);
  if (internals) acc.word_internal = static_cast<double>(internals_correct) / static_cast<double>(internals);
  return acc;
}

}  // namespace segcue
