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

#ifndef SEGCUE_CORPUS_H_
#define SEGCUE_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "segcue/common.h"

namespace segcue {

inline constexpr std::string_view kBoundarySymbol = "<UB>";

// Bidirectional phoneme symbol <-> id map. The utterance-boundary symbol is
// always present; a default-constructed inventory holds only it, at id 0, and
// further symbols receive ids in first-seen order.
class PhonemeInventory {
 public:
  PhonemeInventory();

  // Rebuilds an inventory from an ordered symbol list, which must contain
  // kBoundarySymbol exactly once and no duplicates.
  static PhonemeInventory from_symbols(std::vector<std::string> symbols);

  TokenId intern(std::string_view symbol);
  std::optional<TokenId> find(std::string_view symbol) const;
  // Throws DataError for unknown symbols.
  TokenId id(std::string_view symbol) const;
  const std::string& symbol(TokenId id) const;

  std::size_t size() const { return symbols_.size(); }
  TokenId ub_id() const { return ub_id_; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const PhonemeInventory& other) const {
    return symbols_ == other.symbols_ && ub_id_ == other.ub_id_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> index_;
  TokenId ub_id_ = 0;
};

struct Utterance {
  std::vector<TokenId> tokens;
  // boundaries[k] is set iff a word starts at tokens[k]; boundaries[0] == 1.
  BoundaryVector boundaries;

  std::size_t size() const { return tokens.size(); }
  std::size_t word_count() const;

  bool operator==(const Utterance&) const = default;
};

struct Corpus {
  PhonemeInventory inventory;
  std::vector<Utterance> utterances;
  std::string language_tag;

  std::size_t token_count() const;
  std::size_t word_count() const;

  // Throws DataError if any invariant is violated.
  void validate() const;

  bool operator==(const Corpus&) const = default;
};

struct Delimiters {
  std::string word = "\t";
  std::string phoneme = " ";
};

// Parses one utterance per line. Lines with an empty phoneme token are
// rejected and reported through `diagnostics` as "line N: ..."; empty lines
// are skipped. Symbols missing from `base` are appended to it in first-seen
// order. Throws DataError when no usable line remains.
Corpus ingest(std::string_view text, const Delimiters& delimiters = {},
              std::vector<std::string>* diagnostics = nullptr, PhonemeInventory base = {});

Corpus read_corpus(const std::string& path, const Delimiters& delimiters = {},
                   std::vector<std::string>* diagnostics = nullptr, PhonemeInventory base = {});

std::string render(const Corpus& corpus, const Delimiters& delimiters = {});

// Renders the corpus phonemes with word delimiters taken from `boundaries`
// (one vector per utterance) instead of the gold ones.
std::string render(const Corpus& corpus, std::span<const BoundaryVector> boundaries,
                   const Delimiters& delimiters = {});

// <UB> t(1) ... <UB> t(2) ... <UB>: phonemes with word boundaries removed
// and a single boundary token between consecutive utterances.
std::vector<TokenId> strip_boundaries(const Corpus& corpus);

// Index in strip_boundaries(corpus) of the <UB> that precedes each utterance.
std::vector<std::size_t> stream_offsets(const Corpus& corpus);

// Longest prefix of whole utterances holding at most `max_tokens` phonemes.
Corpus subsample(const Corpus& corpus, std::size_t max_tokens);

struct SplitFractions {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Largest-remainder allocation of n items; ties go to the earlier part.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitFractions& fractions);

// Seeded utterance-level partition. Every part shares the source inventory
// and keeps the original utterance order.
CorpusSplit split(const Corpus& corpus, const SplitFractions& fractions, std::uint64_t seed);

using Word = std::vector<std::string>;
using Lexicon = std::vector<Word>;

Lexicon parse_lexicon(std::string_view text, const std::string& phoneme_delim = " ");

// `n_words` distinct words of `word_length` phonemes over an alphabet of
// `alphabet_size` symbols.
Lexicon random_lexicon(std::size_t word_length, std::size_t n_words, std::size_t alphabet_size,
                       std::uint64_t seed);

struct SynthesisOptions {
  std::size_t min_words = 4;
  std::size_t max_words = 8;
  std::size_t n_utterances = 1000;
  std::uint64_t seed = 1;
};

// Utterances of uniformly many words drawn uniformly from the lexicon.
Corpus synthesize(const Lexicon& lexicon, const SynthesisOptions& options);

}  // namespace segcue

#endif  // SEGCUE_CORPUS_H_
