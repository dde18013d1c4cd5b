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

#include "segcue/grid.h"

#include <charconv>
#include <string>
#include <utility>

#include "segcue/parallel.h"

namespace segcue {

namespace {

int cue_preference(CueKind cue) {
  switch (cue) {
    case CueKind::kUbp: return 0;
    case CueKind::kEntropy: return 1;
    case CueKind::kLoss: return 2;
    case CueKind::kRank: return 3;
  }
  return 4;
}

int strategy_preference(Strategy strategy) {
  switch (strategy) {
    case Strategy::kPeak: return 0;
    case Strategy::kRelative: return 1;
    case Strategy::kThreshold: return 2;
  }
  return 3;
}

std::string fixed4(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

std::string general17(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

const GridCell& GridResult::at(CueKind cue, Strategy strategy) const {
  for (const auto& cell : cells)
    if (cell.cue == cue && cell.strategy == strategy) return cell;
  throw ArgumentError("grid has no cell for " + std::string(cue_name(cue)) + "/" +
                      std::string(strategy_name(strategy)));
}

const GridCell& GridResult::best() const {
  if (cells.empty()) throw ArgumentError("empty grid");
  const GridCell* best = &cells.front();
  for (const auto& cell : cells) {
    const double f = cell.score.f1();
    const double g = best->score.f1();
    if (f > g || (f == g && std::pair(cue_preference(cell.cue), strategy_preference(cell.strategy)) <
                                std::pair(cue_preference(best->cue), strategy_preference(best->strategy))))
      best = &cell;
  }
  return *best;
}

GridResult run_grid(const Corpus& tune_corpus, std::span<const CueTrack> tune_tracks, const Corpus& eval_corpus,
                    std::span<const CueTrack> eval_tracks, const GridOptions& options) {
  if (eval_tracks.size() != eval_corpus.utterances.size())
    throw DataError("evaluation tracks do not match the evaluation corpus");

  GridResult grid;
  for (CueKind cue : kAllCues)
    for (Strategy strategy : kAllStrategies) {
      GridCell cell;
      cell.cue = cue;
      cell.strategy = strategy;
      grid.cells.push_back(std::move(cell));
    }

  parallel_for(grid.cells.size(), options.threads, [&](std::size_t i) {
    GridCell& cell = grid.cells[i];
    if (cell.strategy != Strategy::kPeak) {
      auto tuned = tune(tune_corpus, tune_tracks, cell.cue, cell.strategy, options.n_candidates);
      cell.parameter = tuned.parameter;
      cell.tuning_score = tuned.score;
    }
    cell.segmentation = segment(eval_tracks, cell.cue, cell.strategy, cell.parameter);
    cell.score = score(eval_corpus, cell.segmentation.boundaries);
  });
  return grid;
}

std::string grid_csv(const GridResult& grid) {
  const GridCell& best = grid.best();
  std::string out = "cue";
  for (Strategy s : kAllStrategies) out += "," + std::string(strategy_name(s));
  out += '\n';
  for (CueKind cue : kAllCues) {
    out += cue_name(cue);
    for (Strategy s : kAllStrategies) {
      const GridCell& cell = grid.at(cue, s);
      out += "," + fixed4(cell.score.f1());
      if (&cell == &best) out += '*';
    }
    out += '\n';
  }
  return out;
}

std::string grid_detail_csv(const GridResult& grid) {
  const GridCell& best = grid.best();
  std::string out = "cue,strategy,parameter,true_positives,false_positives,false_negatives,precision,recall,f1,best\n";
  for (const auto& cell : grid.cells) {
    out += std::string(cue_name(cell.cue)) + "," + std::string(strategy_name(cell.strategy)) + ",";
    if (cell.parameter) out += general17(*cell.parameter);
    out += "," + std::to_string(cell.score.true_positives) + "," + std::to_string(cell.score.false_positives) + "," +
           std::to_string(cell.score.false_negatives) + "," + general17(cell.score.precision()) + "," +
           general17(cell.score.recall()) + "," + general17(cell.score.f1()) + "," + (&cell == &best ? "1" : "0") +
           "\n";
  }
  return out;
}

}  // namespace segcue
