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

#ifndef SEGCUE_CUES_H_
#define SEGCUE_CUES_H_

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "segcue/common.h"
#include "segcue/corpus.h"
#include "segcue/predictor.h"
#include "segcue/trace_io.h"

namespace segcue {

enum class CueKind { kEntropy = 0, kLoss = 1, kRank = 2, kUbp = 3 };

inline constexpr std::array<CueKind, 4> kAllCues = {CueKind::kEntropy, CueKind::kLoss, CueKind::kRank,
                                                    CueKind::kUbp};

std::string_view cue_name(CueKind cue);
// Accepts the names printed by cue_name, case-insensitively.
CueKind parse_cue(std::string_view name);

inline constexpr double kDefaultLossCeiling = 64.0;

struct PositionCues {
  double entropy = 0.0;
  double loss = 0.0;
  std::int64_t rank = 1;
  double ubp = 0.0;
  bool loss_capped = false;
};

// All four cues for one prediction step. Entropy and loss are in bits; rank
// is 1-based with ties broken by ascending token id.
PositionCues position_cues(std::span<const double> q, TokenId observed, TokenId boundary,
                           double loss_ceiling = kDefaultLossCeiling);

// Cue values for one utterance at positions 1..N+1 (vector index i - 1);
// position N+1 is the prediction of the closing <UB>.
struct CueTrack {
  std::size_t utt = 0;
  std::array<std::vector<double>, 4> values;
  // Model state after each position, when available (see PositionRecord).
  std::vector<std::vector<double>> embeddings;
  std::size_t capped_losses = 0;

  std::span<const double> of(CueKind cue) const { return values[static_cast<std::size_t>(cue)]; }
  std::vector<double>& of(CueKind cue) { return values[static_cast<std::size_t>(cue)]; }
  std::size_t length() const { return values[0].size(); }
};

struct CueOptions {
  double loss_ceiling = kDefaultLossCeiling;
  // Record the predictor's next-token distribution after each position as
  // the embedding.
  bool distribution_embeddings = false;
  unsigned threads = 1;
};

// `context` is the stream preceding the utterance and must end with <UB>.
CueTrack compute_cues(const Predictor& predictor, const PhonemeInventory& inventory,
                      std::span<const TokenId> context, const Utterance& utterance, const CueOptions& options = {});

// Tracks for every utterance, each conditioned on the full preceding stream
// of strip_boundaries(corpus).
std::vector<CueTrack> compute_cues(const Predictor& predictor, const Corpus& corpus, const CueOptions& options = {});

std::vector<PositionRecord> to_records(const Corpus& corpus, std::span<const CueTrack> tracks);

// Rebuilds tracks from trace records, checking that every utterance has
// exactly positions 1..N+1 with tokens matching the corpus.
std::vector<CueTrack> tracks_from_records(const Corpus& corpus, std::span<const PositionRecord> records);

}  // namespace segcue

#endif  // SEGCUE_CUES_H_
