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

#ifndef SEGCUE_SEGMENTER_H_
#define SEGCUE_SEGMENTER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "segcue/common.h"
#include "segcue/corpus.h"
#include "segcue/cues.h"
#include "segcue/evaluator.h"

namespace segcue {

enum class Strategy { kPeak = 0, kThreshold = 1, kRelative = 2 };

inline constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::kPeak, Strategy::kThreshold,
                                                           Strategy::kRelative};

std::string_view strategy_name(Strategy strategy);
Strategy parse_strategy(std::string_view name);

// Each placement function takes one cue vector c of length N + 1 (c[k] is the
// value at position k + 1) and returns N flags. Flag 0 is always set; only
// positions 2..N are decided by the strategy.

// Boundary where c(i) is strictly above both neighbours.
BoundaryVector place_peak(std::span<const double> cue);
// Boundary where c(i) >= threshold.
BoundaryVector place_threshold(std::span<const double> cue, double threshold);
// Boundary where c(i) - c(i-1) >= delta.
BoundaryVector place_relative(std::span<const double> cue, double delta);

struct Segmentation {
  std::vector<BoundaryVector> boundaries;
  Strategy strategy = Strategy::kPeak;
  CueKind cue = CueKind::kUbp;
  std::optional<double> parameter;
};

// `parameter` is required for threshold/relative and ignored for peak.
Segmentation segment(std::span<const CueTrack> tracks, CueKind cue, Strategy strategy,
                     std::optional<double> parameter = std::nullopt);

inline constexpr std::size_t kDefaultTuningCandidates = 512;

// Distinct values among `n_candidates` equally spaced inverse-CDF quantiles
// of the cue values (threshold) or adjacent differences (relative) observed
// at positions 2..N, in ascending order.
std::vector<double> tuning_candidates(std::span<const CueTrack> tracks, CueKind cue, Strategy strategy,
                                      std::size_t n_candidates = kDefaultTuningCandidates);

struct TuneResult {
  double parameter = 0.0;
  BoundaryScore score;
};

// Candidate with the highest corpus boundary F1 on `gold`; ties go to the
// smallest candidate.
TuneResult tune(const Corpus& gold, std::span<const CueTrack> tracks, CueKind cue, Strategy strategy,
                std::size_t n_candidates = kDefaultTuningCandidates, unsigned threads = 1);

}  // namespace segcue

#endif  // SEGCUE_SEGMENTER_H_
