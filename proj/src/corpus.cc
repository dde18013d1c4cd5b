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

#include "segcue/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "segcue/rng.h"

namespace segcue {

namespace {

std::vector<std::string_view> split_on(std::string_view text, std::string_view delim) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t at = text.find(delim, start);
    if (at == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, at - start));
    start = at + delim.size();
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Corpus subset(const Corpus& corpus, const std::vector<std::size_t>& indices) {
  Corpus out;
  out.inventory = corpus.inventory;
  out.language_tag = corpus.language_tag;
  out.utterances.reserve(indices.size());
  for (std::size_t i : indices) out.utterances.push_back(corpus.utterances[i]);
  return out;
}

}  // namespace

PhonemeInventory::PhonemeInventory() { intern(kBoundarySymbol); }

PhonemeInventory PhonemeInventory::from_symbols(std::vector<std::string> symbols) {
  PhonemeInventory inv;
  inv.symbols_.clear();
  inv.index_.clear();
  bool seen_ub = false;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].empty()) throw DataError("inventory: empty symbol at id " + std::to_string(i));
    if (!inv.index_.emplace(symbols[i], static_cast<TokenId>(i)).second)
      throw DataError("inventory: duplicate symbol '" + symbols[i] + "'");
    if (symbols[i] == kBoundarySymbol) {
      seen_ub = true;
      inv.ub_id_ = static_cast<TokenId>(i);
    }
  }
  if (!seen_ub) throw DataError("inventory: missing " + std::string(kBoundarySymbol));
  inv.symbols_ = std::move(symbols);
  return inv;
}

TokenId PhonemeInventory::intern(std::string_view symbol) {
  if (auto it = index_.find(symbol); it != index_.end()) return it->second;
  TokenId id = static_cast<TokenId>(symbols_.size());
  symbols_.emplace_back(symbol);
  index_.emplace(symbols_.back(), id);
  return id;
}

std::optional<TokenId> PhonemeInventory::find(std::string_view symbol) const {
  if (auto it = index_.find(symbol); it != index_.end()) return it->second;
  return std::nullopt;
}

TokenId PhonemeInventory::id(std::string_view symbol) const {
  if (auto found = find(symbol)) return *found;
  throw DataError("unknown symbol '" + std::string(symbol) + "'");
}

const std::string& PhonemeInventory::symbol(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= symbols_.size())
    throw DataError("token id " + std::to_string(id) + " out of range");
  return symbols_[static_cast<std::size_t>(id)];
}

std::size_t Utterance::word_count() const {
  return static_cast<std::size_t>(std::count(boundaries.begin(), boundaries.end(), 1));
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.size();
  return n;
}

std::size_t Corpus::word_count() const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.word_count();
  return n;
}

void Corpus::validate() const {
  const auto v = static_cast<TokenId>(inventory.size());
  for (std::size_t u = 0; u < utterances.size(); ++u) {
    const auto& utt = utterances[u];
    const std::string where = "utterance " + std::to_string(u);
    if (utt.tokens.empty()) throw DataError(where + ": empty");
    if (utt.boundaries.size() != utt.tokens.size())
      throw DataError(where + ": boundary vector length differs from token count");
    if (utt.boundaries[0] != 1) throw DataError(where + ": first phoneme must start a word");
    for (std::size_t k = 0; k < utt.size(); ++k) {
      if (utt.tokens[k] < 0 || utt.tokens[k] >= v) throw DataError(where + ": token id out of range");
      if (utt.tokens[k] == inventory.ub_id()) throw DataError(where + ": contains the boundary symbol");
      if (utt.boundaries[k] > 1) throw DataError(where + ": boundary flags must be 0 or 1");
    }
  }
}

Corpus ingest(std::string_view text, const Delimiters& delimiters, std::vector<std::string>* diagnostics,
              PhonemeInventory base) {
  if (delimiters.word.empty() || delimiters.phoneme.empty())
    throw ArgumentError("delimiters must be non-empty");
  if (delimiters.word == delimiters.phoneme) throw ArgumentError("word and phoneme delimiters must differ");

  Corpus corpus;
  corpus.inventory = std::move(base);
  std::size_t line_no = 0;
  for (std::string_view line : split_on(text, "\n")) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    Utterance utt;
    std::vector<std::string_view> symbols;
    std::string problem;
    for (std::string_view word : split_on(line, delimiters.word)) {
      bool first = true;
      for (std::string_view phoneme : split_on(word, delimiters.phoneme)) {
        if (phoneme.empty()) {
          problem = "empty phoneme token";
          break;
        }
        if (phoneme == kBoundarySymbol) {
          problem = "reserved symbol " + std::string(kBoundarySymbol);
          break;
        }
        symbols.push_back(phoneme);
        utt.boundaries.push_back(first ? 1 : 0);
        first = false;
      }
      if (!problem.empty()) break;
    }
    if (!problem.empty()) {
      if (diagnostics) diagnostics->push_back("line " + std::to_string(line_no) + ": " + problem);
      continue;
    }
    utt.tokens.reserve(symbols.size());
    for (auto s : symbols) utt.tokens.push_back(corpus.inventory.intern(s));
    corpus.utterances.push_back(std::move(utt));
  }
  if (corpus.utterances.empty()) throw DataError("no usable utterances in input");
  return corpus;
}

Corpus read_corpus(const std::string& path, const Delimiters& delimiters, std::vector<std::string>* diagnostics,
                   PhonemeInventory base) {
  return ingest(read_file(path), delimiters, diagnostics, std::move(base));
}

std::string render(const Corpus& corpus, std::span<const BoundaryVector> boundaries, const Delimiters& delimiters) {
  if (boundaries.size() != corpus.utterances.size())
    throw DataError("segmentation covers " + std::to_string(boundaries.size()) + " utterances, corpus has " +
                    std::to_string(corpus.utterances.size()));
  std::string out;
  for (std::size_t u = 0; u < corpus.utterances.size(); ++u) {
    const auto& utt = corpus.utterances[u];
    if (boundaries[u].size() != utt.size())
      throw DataError("utterance " + std::to_string(u) + ": segmentation length mismatch");
    for (std::size_t k = 0; k < utt.size(); ++k) {
      if (k > 0) out += boundaries[u][k] ? delimiters.word : delimiters.phoneme;
      out += corpus.inventory.symbol(utt.tokens[k]);
    }
    out += '\n';
  }
  return out;
}

std::string render(const Corpus& corpus, const Delimiters& delimiters) {
  std::vector<BoundaryVector> gold;
  gold.reserve(corpus.utterances.size());
  for (const auto& u : corpus.utterances) gold.push_back(u.boundaries);
  return render(corpus, gold, delimiters);
}

std::vector<TokenId> strip_boundaries(const Corpus& corpus) {
  std::vector<TokenId> stream;
  stream.reserve(corpus.token_count() + corpus.utterances.size() + 1);
  const TokenId ub = corpus.inventory.ub_id();
  stream.push_back(ub);
  for (const auto& u : corpus.utterances) {
    stream.insert(stream.end(), u.tokens.begin(), u.tokens.end());
    stream.push_back(ub);
  }
  return stream;
}

std::vector<std::size_t> stream_offsets(const Corpus& corpus) {
  std::vector<std::size_t> offsets;
  offsets.reserve(corpus.utterances.size());
  std::size_t at = 0;
  for (const auto& u : corpus.utterances) {
    offsets.push_back(at);
    at += u.size() + 1;
  }
  return offsets;
}

Corpus subsample(const Corpus& corpus, std::size_t max_tokens) {
  if (max_tokens < 1) throw ArgumentError("max_tokens must be at least 1");
  std::vector<std::size_t> keep;
  std::size_t total = 0;
  for (std::size_t u = 0; u < corpus.utterances.size(); ++u) {
    std::size_t n = corpus.utterances[u].size();
    if (total + n > max_tokens) break;
    total += n;
    keep.push_back(u);
  }
  if (keep.empty())
    throw DataError("first utterance (" + std::to_string(corpus.utterances.front().size()) +
                    " phonemes) exceeds the token budget of " + std::to_string(max_tokens));
  return subset(corpus, keep);
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitFractions& fractions) {
  const std::array<double, 3> f{fractions.train, fractions.dev, fractions.test};
  for (double x : f)
    if (!(x > 0.0) || !std::isfinite(x)) throw ArgumentError("split fractions must be positive");
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) throw ArgumentError("split fractions must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = f[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

CorpusSplit split(const Corpus& corpus, const SplitFractions& fractions, std::uint64_t seed) {
  const std::size_t n = corpus.utterances.size();
  auto sizes = split_sizes(n, fractions);
  if (sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0)
    throw DataError("split of " + std::to_string(n) + " utterances leaves a part empty");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(seed, 0x73706c6974ULL));
  rng.shuffle(std::span(order));

  auto part = [&](std::size_t from, std::size_t count) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(from),
                                 order.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(idx.begin(), idx.end());
    return subset(corpus, idx);
  };
  return CorpusSplit{part(0, sizes[0]), part(sizes[0], sizes[1]), part(sizes[0] + sizes[1], sizes[2])};
}

Lexicon parse_lexicon(std::string_view text, const std::string& phoneme_delim) {
  Lexicon lexicon;
  std::size_t line_no = 0;
  for (std::string_view line : split_on(text, "\n")) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    Word word;
    for (std::string_view p : split_on(line, phoneme_delim)) {
      if (p.empty()) throw DataError("lexicon line " + std::to_string(line_no) + ": empty phoneme token");
      if (p == kBoundarySymbol) throw DataError("lexicon line " + std::to_string(line_no) + ": reserved symbol");
      word.emplace_back(p);
    }
    lexicon.push_back(std::move(word));
  }
  if (lexicon.empty()) throw DataError("lexicon is empty");
  return lexicon;
}

Lexicon random_lexicon(std::size_t word_length, std::size_t n_words, std::size_t alphabet_size,
                       std::uint64_t seed) {
  if (word_length == 0 || n_words == 0 || alphabet_size == 0)
    throw ArgumentError("random lexicon needs positive word length, size and alphabet");
  if (std::pow(static_cast<double>(alphabet_size), static_cast<double>(word_length)) < static_cast<double>(n_words))
    throw ArgumentError("alphabet too small for the requested number of distinct words");

  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < alphabet_size; ++i)
    alphabet.push_back(alphabet_size <= 26 ? std::string(1, static_cast<char>('a' + i)) : "p" + std::to_string(i));

  Rng rng(mix_seed(seed, 0x6c6578ULL));
  std::set<Word> seen;
  Lexicon lexicon;
  while (lexicon.size() < n_words) {
    Word w;
    for (std::size_t k = 0; k < word_length; ++k) w.push_back(alphabet[rng.below(alphabet_size)]);
    if (seen.insert(w).second) lexicon.push_back(std::move(w));
  }
  return lexicon;
}

Corpus synthesize(const Lexicon& lexicon, const SynthesisOptions& options) {
  if (lexicon.empty()) throw ArgumentError("lexicon is empty");
  for (const auto& w : lexicon)
    if (w.empty()) throw ArgumentError("lexicon contains an empty word");
  if (options.min_words < 1 || options.min_words > options.max_words)
    throw ArgumentError("utterance length range is degenerate");
  if (options.n_utterances < 1) throw ArgumentError("n_utterances must be at least 1");

  Corpus corpus;
  corpus.language_tag = "synthetic";
  Rng rng(mix_seed(options.seed, 0x73796e7468ULL));
  const std::size_t span = options.max_words - options.min_words + 1;
  for (std::size_t u = 0; u < options.n_utterances; ++u) {
    Utterance utt;
    std::size_t words = options.min_words + rng.below(span);
    for (std::size_t w = 0; w < words; ++w) {
      const Word& word = lexicon[rng.below(lexicon.size())];
      for (std::size_t k = 0; k < word.size(); ++k) {
        utt.tokens.push_back(corpus.inventory.intern(word[k]));
        utt.boundaries.push_back(k == 0 ? 1 : 0);
      }
    }
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

}  // namespace segcue
