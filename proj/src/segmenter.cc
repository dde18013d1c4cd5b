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

#include "segcue/segmenter.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "segcue/parallel.h"

namespace segcue {

namespace {

std::size_t phonemes_of(std::span<const double> cue) {
  if (cue.empty()) throw ArgumentError("cue track must cover at least the closing <UB> step");
  return cue.size() - 1;
}

template <typename Rule>
BoundaryVector place(std::span<const double> cue, Rule rule) {
  const std::size_t n = phonemes_of(cue);
  BoundaryVector out(n, 0);
  if (n == 0) return out;
  out[0] = 1;
  for (std::size_t k = 1; k < n; ++k) out[k] = rule(k) ? 1 : 0;
  return out;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kPeak: return "peak";
    case Strategy::kThreshold: return "threshold";
    case Strategy::kRelative: return "relative";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Strategy s : kAllStrategies)
    if (lower == strategy_name(s)) return s;
  throw ArgumentError("unknown strategy '" + std::string(name) + "' (expected peak, threshold or relative)");
}

BoundaryVector place_peak(std::span<const double> cue) {
  return place(cue, [&](std::size_t k) { return cue[k] > cue[k - 1] && cue[k] > cue[k + 1]; });
}

BoundaryVector place_threshold(std::span<const double> cue, double threshold) {
  return place(cue, [&](std::size_t k) { return cue[k] >= threshold; });
}

BoundaryVector place_relative(std::span<const double> cue, double delta) {
  return place(cue, [&](std::size_t k) { return cue[k] - cue[k - 1] >= delta; });
}

Segmentation segment(std::span<const CueTrack> tracks, CueKind cue, Strategy strategy,
                     std::optional<double> parameter) {
  Segmentation seg;
  seg.cue = cue;
  seg.strategy = strategy;
  if (strategy != Strategy::kPeak) {
    if (!parameter) throw ArgumentError(std::string(strategy_name(strategy)) + " strategy needs a parameter");
    if (!std::isfinite(*parameter)) throw ArgumentError("strategy parameter must be finite");
    seg.parameter = parameter;
  }
  seg.boundaries.reserve(tracks.size());
  for (const auto& track : tracks) {
    auto values = track.of(cue);
    switch (strategy) {
      case Strategy::kPeak: seg.boundaries.push_back(place_peak(values)); break;
      case Strategy::kThreshold: seg.boundaries.push_back(place_threshold(values, *parameter)); break;
      case Strategy::kRelative: seg.boundaries.push_back(place_relative(values, *parameter)); break;
    }
  }
  return seg;
}

std::vector<double> tuning_candidates(std::span<const CueTrack> tracks, CueKind cue, Strategy strategy,
                                      std::size_t n_candidates) {
  if (strategy == Strategy::kPeak) throw ArgumentError("peak strategy has no parameter to tune");
  if (n_candidates < 1) throw ArgumentError("need at least one tuning candidate");

  std::vector<double> observed;
  for (const auto& track : tracks) {
    auto c = track.of(cue);
    const std::size_t n = phonemes_of(c);
    for (std::size_t k = 1; k < n; ++k) observed.push_back(strategy == Strategy::kThreshold ? c[k] : c[k] - c[k - 1]);
  }
  if (observed.empty()) return {};
  std::sort(observed.begin(), observed.end());

  // Inverse-CDF (type 1) quantiles: invariant under replicating the data.
  const std::size_t m = observed.size();
  std::vector<double> candidates;
  candidates.reserve(n_candidates);
  for (std::size_t j = 0; j < n_candidates; ++j) {
    std::size_t idx = 0;
    if (n_candidates > 1 && j > 0) {
      // ceil(j * m / (n - 1)) - 1 in exact integer arithmetic.
      const std::size_t num = j * m;
      const std::size_t den = n_candidates - 1;
      idx = (num + den - 1) / den - 1;
    }
    candidates.push_back(observed[std::min(idx, m - 1)]);
  }
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates;
}

TuneResult tune(const Corpus& gold, std::span<const CueTrack> tracks, CueKind cue, Strategy strategy,
                std::size_t n_candidates, unsigned threads) {
  if (gold.utterances.empty() || tracks.empty()) throw DataError("tuning set is empty");
  if (tracks.size() != gold.utterances.size()) throw DataError("tuning tracks do not match the tuning corpus");
  const auto candidates = tuning_candidates(tracks, cue, strategy, n_candidates);
  if (candidates.empty()) throw DataError("tuning set has no utterance-internal positions");

  std::vector<BoundaryScore> scores(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t j) {
    scores[j] = score(gold, segment(tracks, cue, strategy, candidates[j]).boundaries);
  });

  std::size_t best = 0;
  for (std::size_t j = 1; j < candidates.size(); ++j)
    if (scores[j].f1() > scores[best].f1()) best = j;
  return TuneResult{candidates[best], scores[best]};
}

}  // namespace segcue
