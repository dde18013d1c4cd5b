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

#ifndef SEGCUE_TOKENIZER_H_
#define SEGCUE_TOKENIZER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "segcue/common.h"
#include "segcue/corpus.h"
#include "segcue/cues.h"

namespace segcue {

enum class MergeCriterion { kUbp, kEntropy, kFrequency };

std::string_view criterion_name(MergeCriterion criterion);
MergeCriterion parse_criterion(std::string_view name);
// The cue a criterion reads; kFrequency has none.
std::optional<CueKind> criterion_cue(MergeCriterion criterion);

// A token stream with one cue value per token.
struct ScoredStream {
  std::vector<TokenId> tokens;
  std::vector<double> values;
};

// strip_boundaries(corpus) paired with the cue value predicting each token;
// the leading <UB> has no prediction and gets 0.
ScoredStream scored_stream(const Corpus& corpus, std::span<const CueTrack> tracks, CueKind cue);

// Cue values are summed exactly in fixed point with this many units per 1.0,
// so merged values conserve the stream's total cue mass bit for bit.
inline constexpr double kCueFixedPointScale = 4294967296.0;  // 2^32

struct Merge {
  TokenId left = 0;
  TokenId right = 0;
  TokenId result = 0;
  double score = 0.0;

  bool operator==(const Merge&) const = default;
};

// Ordered merges over a vocabulary that starts as the phoneme inventory.
// Each merge appends one token named by concatenating its parts.
class MergeTable {
 public:
  MergeTable(std::vector<std::string> initial_vocabulary, MergeCriterion criterion, std::size_t target_size);

  // Appends the merged token; returns its id.
  TokenId add_merge(TokenId left, TokenId right, double score);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<Merge>& merges() const { return merges_; }
  std::size_t initial_size() const { return initial_size_; }
  std::size_t target_size() const { return target_size_; }
  MergeCriterion criterion() const { return criterion_; }
  TokenId boundary_id() const { return boundary_id_; }

  std::optional<TokenId> find(std::string_view name) const;
  // Initial-vocabulary ids spelled by a token.
  std::vector<TokenId> spelling(TokenId token) const;

  // Header line, then `left<TAB>right<TAB>score` per merge.
  void write_merges(std::ostream& out) const;
  // Header line, then one token per line in id order.
  void write_vocabulary(std::ostream& out) const;
  static MergeTable read(std::istream& vocabulary, std::istream& merges);

  bool operator==(const MergeTable& other) const {
    return vocabulary_ == other.vocabulary_ && merges_ == other.merges_ && initial_size_ == other.initial_size_ &&
           target_size_ == other.target_size_ && criterion_ == other.criterion_;
  }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, TokenId> index_;
  std::vector<Merge> merges_;
  std::size_t initial_size_;
  std::size_t target_size_;
  MergeCriterion criterion_;
  TokenId boundary_id_ = 0;
};

struct TokenizerOptions {
  std::size_t target_vocab = 0;
  // Pairs seen fewer times are never merged.
  std::size_t min_pair_count = 1;
};

struct MergeStep {
  std::size_t occurrences = 0;  // non-overlapping occurrences replaced
  std::size_t tokens_after = 0;
  std::int64_t mass_after = 0;  // fixed-point cue mass of the stream
};

struct TokenizerTrainResult {
  MergeTable table;
  std::vector<TokenId> final_tokens;
  std::vector<std::int64_t> final_values;
  std::int64_t initial_mass = 0;
  std::vector<MergeStep> steps;
  // Set when no admissible pair remained before target_vocab was reached.
  bool stopped_early = false;
};

// Greedy cue merges: score every adjacent pair (no <UB> on either side) by
// the mean cue value at its second token, merge the lowest-scoring pair
// everywhere (left to right, non-overlapping) and give each merged token the
// sum of its parts' values. Ties go to the lexicographically smallest
// (left, right) names. Pairs whose concatenation already names a token are
// skipped.
TokenizerTrainResult train_cue_merges(const PhonemeInventory& inventory, const ScoredStream& stream,
                                      MergeCriterion criterion, const TokenizerOptions& options);

// Same loop scoring pairs by occurrence count (overlaps included) and merging
// the most frequent.
TokenizerTrainResult train_freq_bpe(const PhonemeInventory& inventory, std::span<const TokenId> stream,
                                    const TokenizerOptions& options);

// Replaces every non-overlapping (left, right) occurrence, scanning left to
// right. Returns the number of replacements.
std::size_t apply_merge(const Merge& merge, std::vector<TokenId>& tokens, std::vector<std::int64_t>* values = nullptr);

// Applies the merges in table order. Accepts any ids of the table's
// vocabulary; throws DataError on others.
std::vector<TokenId> encode(const MergeTable& table, std::span<const TokenId> tokens);

}  // namespace segcue

#endif  // SEGCUE_TOKENIZER_H_
