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

#ifndef SEGCUE_GRID_H_
#define SEGCUE_GRID_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segcue/corpus.h"
#include "segcue/cues.h"
#include "segcue/evaluator.h"
#include "segcue/segmenter.h"

namespace segcue {

struct GridCell {
  CueKind cue = CueKind::kUbp;
  Strategy strategy = Strategy::kPeak;
  // Tuned parameter; empty for peak.
  std::optional<double> parameter;
  // Score of the tuned parameter on the tuning set.
  std::optional<BoundaryScore> tuning_score;
  BoundaryScore score;
  Segmentation segmentation;
};

struct GridResult {
  // Cue-major in kAllCues x kAllStrategies order.
  std::vector<GridCell> cells;

  const GridCell& at(CueKind cue, Strategy strategy) const;
  // Highest F1; ties prefer cue UBP > entropy > loss > rank, then strategy
  // peak > relative > threshold.
  const GridCell& best() const;
};

struct GridOptions {
  std::size_t n_candidates = kDefaultTuningCandidates;
  unsigned threads = 1;
};

// Tunes threshold/relative parameters on the tuning set and scores every
// cue x strategy combination on the evaluation set.
GridResult run_grid(const Corpus& tune_corpus, std::span<const CueTrack> tune_tracks, const Corpus& eval_corpus,
                    std::span<const CueTrack> eval_tracks, const GridOptions& options = {});

// Rows are cues, columns strategies, cells F1 with 4 decimals; the best cell
// carries a trailing '*'.
std::string grid_csv(const GridResult& grid);

// One row per cell with parameter, counts, precision, recall and F1.
std::string grid_detail_csv(const GridResult& grid);

}  // namespace segcue

#endif  // SEGCUE_GRID_H_
