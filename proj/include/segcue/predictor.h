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

#ifndef SEGCUE_PREDICTOR_H_
#define SEGCUE_PREDICTOR_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "segcue/common.h"
#include "segcue/corpus.h"

namespace segcue {

// Next-token distributions over an inventory (phonemes plus <UB>).
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::size_t vocab_size() const = 0;

  // Writes P(. | context) into `out`, which must hold vocab_size() entries.
  // `context` is the full preceding stream, oldest token first.
  virtual void distribution(std::span<const TokenId> context, std::span<double> out) const = 0;

  std::vector<double> distribution(std::span<const TokenId> context) const;
};

// Interpolated Witten-Bell n-gram model. The base case interpolates the
// unigram estimate with a uniform distribution over the inventory, so every
// symbol keeps non-zero probability.
class NGramModel final : public Predictor {
 public:
  struct ContextCounts {
    std::map<TokenId, std::uint64_t> successors;
    std::uint64_t total = 0;

    bool operator==(const ContextCounts&) const = default;
  };

  // An untrained model: every query returns the uniform distribution.
  NGramModel(PhonemeInventory inventory, int order);

  static NGramModel train(const PhonemeInventory& inventory, std::span<const TokenId> stream, int order);

  std::size_t vocab_size() const override { return inventory_.size(); }
  using Predictor::distribution;
  void distribution(std::span<const TokenId> context, std::span<double> out) const override;

  int order() const { return order_; }
  const PhonemeInventory& inventory() const { return inventory_; }

  // Number of times `ngram` occurs in the training stream (its last token
  // being the successor); length 1..order.
  std::uint64_t count(std::span<const TokenId> ngram) const;
  // Successor table for a context of length 0..order-1, or nullptr.
  const ContextCounts* context_counts(std::span<const TokenId> context) const;

  void save(std::ostream& out) const;
  static NGramModel load(std::istream& in);

  bool operator==(const NGramModel& other) const {
    return order_ == other.order_ && inventory_ == other.inventory_ && tables_ == other.tables_;
  }

 private:
  int order_;
  PhonemeInventory inventory_;
  // tables_[k] maps contexts of length k to successor counts.
  std::vector<std::map<std::vector<TokenId>, ContextCounts>> tables_;
};

// Seeded stand-in for an untrained model: the distribution at stream
// position p (the context length) is a symmetric Dirichlet(alpha) draw keyed
// by (seed, p).
class RandomPredictor final : public Predictor {
 public:
  RandomPredictor(std::size_t vocab_size, std::uint64_t seed, double alpha = 1.0);

  std::size_t vocab_size() const override { return vocab_size_; }
  using Predictor::distribution;
  void distribution(std::span<const TokenId> context, std::span<double> out) const override;

  void distribution_at(std::size_t position_index, std::span<double> out) const;
  std::vector<double> distribution_at(std::size_t position_index) const;

  std::uint64_t seed() const { return seed_; }
  double alpha() const { return alpha_; }

 private:
  std::size_t vocab_size_;
  std::uint64_t seed_;
  double alpha_;
};

}  // namespace segcue

#endif  // SEGCUE_PREDICTOR_H_
