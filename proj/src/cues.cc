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

#include "segcue/cues.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "segcue/parallel.h"

namespace segcue {

std::string_view cue_name(CueKind cue) {
  switch (cue) {
    case CueKind::kEntropy: return "entropy";
    case CueKind::kLoss: return "loss";
    case CueKind::kRank: return "rank";
    case CueKind::kUbp: return "ubp";
  }
  return "?";
}

CueKind parse_cue(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (CueKind cue : kAllCues)
    if (lower == cue_name(cue)) return cue;
  if (lower == "surprisal") return CueKind::kLoss;
  throw ArgumentError("unknown cue '" + std::string(name) + "' (expected entropy, loss, rank or ubp)");
}

PositionCues position_cues(std::span<const double> q, TokenId observed, TokenId boundary, double loss_ceiling) {
  const auto v = q.size();
  if (observed < 0 || static_cast<std::size_t>(observed) >= v || boundary < 0 ||
      static_cast<std::size_t>(boundary) >= v)
    throw ArgumentError("token id outside the distribution");

  PositionCues out;
  double h = 0.0;
  for (double p : q)
    if (p > 0.0) h -= p * std::log2(p);
  out.entropy = std::clamp(h, 0.0, std::log2(static_cast<double>(v)));

  const auto t = static_cast<std::size_t>(observed);
  const double qt = q[t];
  if (qt > 0.0) {
    out.loss = std::min(-std::log2(qt), loss_ceiling) + 0.0;
    out.loss_capped = -std::log2(qt) > loss_ceiling;
  } else {
    out.loss = loss_ceiling;
    out.loss_capped = true;
  }

  std::int64_t rank = 1;
  for (std::size_t w = 0; w < v; ++w)
    if (q[w] > qt || (q[w] == qt && w < t)) ++rank;
  out.rank = rank;

  out.ubp = std::clamp(q[static_cast<std::size_t>(boundary)], 0.0, 1.0);
  return out;
}

CueTrack compute_cues(const Predictor& predictor, const PhonemeInventory& inventory,
                      std::span<const TokenId> context, const Utterance& utterance, const CueOptions& options) {
  const TokenId ub = inventory.ub_id();
  if (context.empty() || context.back() != ub) throw ArgumentError("cue context must end with <UB>");
  if (predictor.vocab_size() != inventory.size())
    throw ArgumentError("predictor vocabulary size differs from the inventory");

  std::vector<TokenId> history(context.begin(), context.end());
  history.reserve(context.size() + utterance.size() + 1);

  const std::size_t n = utterance.size();
  CueTrack track;
  for (auto& v : track.values) v.reserve(n + 1);
  std::vector<double> q(predictor.vocab_size());

  predictor.distribution(history, q);
  for (std::size_t i = 0; i <= n; ++i) {
    const TokenId target = i < n ? utterance.tokens[i] : ub;
    PositionCues c = position_cues(q, target, ub, options.loss_ceiling);
    track.of(CueKind::kEntropy).push_back(c.entropy);
    track.of(CueKind::kLoss).push_back(c.loss);
    track.of(CueKind::kRank).push_back(static_cast<double>(c.rank));
    track.of(CueKind::kUbp).push_back(c.ubp);
    if (c.loss_capped) ++track.capped_losses;

    history.push_back(target);
    if (i == n && !options.distribution_embeddings) break;
    predictor.distribution(history, q);
    if (options.distribution_embeddings) track.embeddings.push_back(q);
  }
  return track;
}

std::vector<CueTrack> compute_cues(const Predictor& predictor, const Corpus& corpus, const CueOptions& options) {
  const auto stream = strip_boundaries(corpus);
  const auto offsets = stream_offsets(corpus);
  std::vector<CueTrack> tracks(corpus.utterances.size());
  parallel_for(tracks.size(), options.threads, [&](std::size_t u) {
    std::span<const TokenId> context(stream.data(), offsets[u] + 1);
    tracks[u] = compute_cues(predictor, corpus.inventory, context, corpus.utterances[u], options);
    tracks[u].utt = u;
  });
  return tracks;
}

std::vector<PositionRecord> to_records(const Corpus& corpus, std::span<const CueTrack> tracks) {
  if (tracks.size() != corpus.utterances.size()) throw ArgumentError("one cue track per utterance required");
  std::vector<PositionRecord> records;
  records.reserve(corpus.token_count() + corpus.utterances.size());
  for (std::size_t u = 0; u < tracks.size(); ++u) {
    const auto& utt = corpus.utterances[u];
    const auto& track = tracks[u];
    if (track.length() != utt.size() + 1)
      throw ArgumentError("utterance " + std::to_string(u) + ": track length mismatch");
    for (std::size_t k = 0; k <= utt.size(); ++k) {
      PositionRecord r;
      r.utt = u;
      r.pos = k + 1;
      r.token = corpus.inventory.symbol(k < utt.size() ? utt.tokens[k] : corpus.inventory.ub_id());
      r.entropy = track.of(CueKind::kEntropy)[k];
      r.surprisal = track.of(CueKind::kLoss)[k];
      r.rank = static_cast<std::int64_t>(track.of(CueKind::kRank)[k]);
      r.ubp = track.of(CueKind::kUbp)[k];
      if (!track.embeddings.empty()) r.embedding = track.embeddings[k];
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::vector<CueTrack> tracks_from_records(const Corpus& corpus, std::span<const PositionRecord> records) {
  std::vector<CueTrack> tracks(corpus.utterances.size());
  std::size_t at = 0;
  for (std::size_t u = 0; u < tracks.size(); ++u) {
    const auto& utt = corpus.utterances[u];
    auto& track = tracks[u];
    track.utt = u;
    for (std::size_t k = 0; k <= utt.size(); ++k, ++at) {
      const std::string where = "trace for utterance " + std::to_string(u) + ", pos " + std::to_string(k + 1) + ": ";
      if (at >= records.size()) throw DataError(where + "missing record");
      const auto& r = records[at];
      if (r.utt != u || r.pos != k + 1)
        throw DataError(where + "found utt " + std::to_string(r.utt) + " pos " + std::to_string(r.pos));
      const auto& expected = corpus.inventory.symbol(k < utt.size() ? utt.tokens[k] : corpus.inventory.ub_id());
      if (r.token != expected) throw DataError(where + "token '" + r.token + "' but corpus has '" + expected + "'");
      track.of(CueKind::kEntropy).push_back(r.entropy);
      track.of(CueKind::kLoss).push_back(r.surprisal);
      track.of(CueKind::kRank).push_back(static_cast<double>(r.rank));
      track.of(CueKind::kUbp).push_back(r.ubp);
      if (r.embedding) {
        if (k != track.embeddings.size()) throw DataError(where + "embeddings must be present on every record");
        track.embeddings.push_back(*r.embedding);
      } else if (!track.embeddings.empty()) {
        throw DataError(where + "embeddings must be present on every record");
      }
    }
  }
  if (at != records.size())
    throw DataError("trace has " + std::to_string(records.size() - at) + " records beyond the corpus");
  return tracks;
}

}  // namespace segcue
