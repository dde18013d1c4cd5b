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

#ifndef SEGCUE_EVALUATOR_H_
#define SEGCUE_EVALUATOR_H_

#include <cstddef>
#include <span>

#include "segcue/common.h"
#include "segcue/corpus.h"

namespace segcue {

// Micro-averaged boundary counts over utterance-internal positions 2..N.
struct BoundaryScore {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  // An empty denominator yields 1 (nothing to find, nothing claimed).
  double precision() const;
  double recall() const;
  double f1() const;

  BoundaryScore& operator+=(const BoundaryScore& other);
  bool operator==(const BoundaryScore&) const = default;
};

BoundaryScore score_utterance(const BoundaryVector& gold, const BoundaryVector& predicted);

// Throws DataError naming the first utterance whose length differs.
BoundaryScore score(const Corpus& gold, std::span<const BoundaryVector> predicted);

struct McNemarResult {
  // b: positions where A is right and B wrong; c: the reverse.
  std::size_t b = 0;
  std::size_t c = 0;
  double p_value = 1.0;
  bool exact = true;
};

// Largest discordant total b + c that still uses the exact binomial test.
inline constexpr std::size_t kMcNemarExactLimit = 100;

// Two-sided p-value: exact binomial for b + c <= kMcNemarExactLimit,
// continuity-corrected chi-square otherwise; 1 when b + c == 0.
McNemarResult mcnemar_test(std::size_t b, std::size_t c);

// Compares two segmenters position by position over the scored positions.
McNemarResult mcnemar(const Corpus& gold, std::span<const BoundaryVector> a, std::span<const BoundaryVector> b);

}  // namespace segcue

#endif  // SEGCUE_EVALUATOR_H_
