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

#include "segcue/tokenizer.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace segcue {

namespace {

constexpr char kMergesHeader[] = "#segcue-merges";
constexpr char kVocabularyHeader[] = "#segcue-vocab";
constexpr int kTokenizerFormatVersion = 1;

// Values are kept within +-2^20 so that sums over long streams fit in 64 bits.
constexpr double kMaxCueMagnitude = 1048576.0;

std::uint64_t pair_key(TokenId a, TokenId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct PairStats {
  std::size_t count = 0;
  std::int64_t mass = 0;  // fixed-point sum of the second token's values
};

std::string general17(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    auto at = line.find('\t', start);
    parts.push_back(line.substr(start, at == std::string::npos ? std::string::npos : at - start));
    if (at == std::string::npos) return parts;
    start = at + 1;
  }
}

bool getline_clean(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

// Returns true when candidate (a) beats the incumbent (b).
bool better(MergeCriterion criterion, const PairStats& a, const PairStats& b, const std::string& a_left,
            const std::string& a_right, const std::string& b_left, const std::string& b_right) {
  if (criterion == MergeCriterion::kFrequency) {
    if (a.count != b.count) return a.count > b.count;
  } else {
    // Mean comparison a.mass / a.count < b.mass / b.count without rounding.
    const __int128 lhs = static_cast<__int128>(a.mass) * static_cast<__int128>(b.count);
    const __int128 rhs = static_cast<__int128>(b.mass) * static_cast<__int128>(a.count);
    if (lhs != rhs) return lhs < rhs;
  }
  if (a_left != b_left) return a_left < b_left;
  return a_right < b_right;
}

TokenizerTrainResult train_merges(const PhonemeInventory& inventory, std::vector<TokenId> tokens,
                                  std::vector<std::int64_t> values, MergeCriterion criterion,
                                  const TokenizerOptions& options) {
  if (tokens.empty()) throw DataError("tokenizer training stream is empty");
  if (options.target_vocab <= inventory.size())
    throw ArgumentError("target vocabulary (" + std::to_string(options.target_vocab) +
                        ") must exceed the initial vocabulary (" + std::to_string(inventory.size()) + ")");
  const auto v = static_cast<TokenId>(inventory.size());
  for (TokenId t : tokens)
    if (t < 0 || t >= v) throw DataError("tokenizer stream id " + std::to_string(t) + " outside the inventory");

  TokenizerTrainResult result{MergeTable(inventory.symbols(), criterion, options.target_vocab), {}, {}, 0, {}, false};
  MergeTable& table = result.table;
  const TokenId ub = table.boundary_id();
  for (auto x : values) result.initial_mass += x;

  std::unordered_map<std::uint64_t, PairStats> pairs;
  while (table.vocabulary().size() < options.target_vocab) {
    pairs.clear();
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (tokens[i] == ub || tokens[i + 1] == ub) continue;
      auto& s = pairs[pair_key(tokens[i], tokens[i + 1])];
      ++s.count;
      s.mass += values[i + 1];
    }

    const std::string* best_left = nullptr;
    const std::string* best_right = nullptr;
    std::uint64_t best_key = 0;
    PairStats best_stats;
    const auto& vocab = table.vocabulary();
    for (const auto& [key, stats] : pairs) {
      if (stats.count < options.min_pair_count) continue;
      const auto& left = vocab[static_cast<std::size_t>(key >> 32)];
      const auto& right = vocab[static_cast<std::size_t>(key & 0xffffffffu)];
      if (best_left && !better(criterion, stats, best_stats, left, right, *best_left, *best_right)) continue;
      if (table.find(left + right)) continue;
      best_left = &left;
      best_right = &right;
      best_key = key;
      best_stats = stats;
    }
    if (!best_left) {
      result.stopped_early = true;
      break;
    }

    const auto left = static_cast<TokenId>(best_key >> 32);
    const auto right = static_cast<TokenId>(best_key & 0xffffffffu);
    const double score = criterion == MergeCriterion::kFrequency
                             ? static_cast<double>(best_stats.count)
                             : static_cast<double>(best_stats.mass) / kCueFixedPointScale /
                                   static_cast<double>(best_stats.count);
    table.add_merge(left, right, score);
    MergeStep step;
    step.occurrences = apply_merge(table.merges().back(), tokens, &values);
    step.tokens_after = tokens.size();
    for (auto x : values) step.mass_after += x;
    result.steps.push_back(step);
  }
  result.final_tokens = std::move(tokens);
  result.final_values = std::move(values);
  return result;
}

}  // namespace

std::string_view criterion_name(MergeCriterion criterion) {
  switch (criterion) {
    case MergeCriterion::kUbp: return "ubp";
    case MergeCriterion::kEntropy: return "entropy";
    case MergeCriterion::kFrequency: return "frequency";
  }
  return "?";
}

MergeCriterion parse_criterion(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (auto c : {MergeCriterion::kUbp, MergeCriterion::kEntropy, MergeCriterion::kFrequency})
    if (lower == criterion_name(c)) return c;
  throw ArgumentError("unknown merge criterion '" + std::string(name) + "' (expected ubp, entropy or frequency)");
}

std::optional<CueKind> criterion_cue(MergeCriterion criterion) {
  switch (criterion) {
    case MergeCriterion::kUbp: return CueKind::kUbp;
    case MergeCriterion::kEntropy: return CueKind::kEntropy;
    case MergeCriterion::kFrequency: return std::nullopt;
  }
  return std::nullopt;
}

ScoredStream scored_stream(const Corpus& corpus, std::span<const CueTrack> tracks, CueKind cue) {
  if (tracks.size() != corpus.utterances.size()) throw DataError("one cue track per utterance required");
  ScoredStream s;
  s.tokens = strip_boundaries(corpus);
  s.values.reserve(s.tokens.size());
  s.values.push_back(0.0);
  for (std::size_t u = 0; u < tracks.size(); ++u) {
    auto c = tracks[u].of(cue);
    if (c.size() != corpus.utterances[u].size() + 1)
      throw DataError("utterance " + std::to_string(u) + ": track length mismatch");
    s.values.insert(s.values.end(), c.begin(), c.end());
  }
  return s;
}

MergeTable::MergeTable(std::vector<std::string> initial_vocabulary, MergeCriterion criterion, std::size_t target_size)
    : vocabulary_(std::move(initial_vocabulary)),
      initial_size_(vocabulary_.size()),
      target_size_(target_size),
      criterion_(criterion) {
  bool seen_ub = false;
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    const auto& name = vocabulary_[i];
    if (name.empty() || name.find_first_of("\t\n\r") != std::string::npos)
      throw DataError("token names must be non-empty and free of tabs and newlines");
    if (!index_.emplace(name, static_cast<TokenId>(i)).second) throw DataError("duplicate token '" + name + "'");
    if (name == kBoundarySymbol) {
      boundary_id_ = static_cast<TokenId>(i);
      seen_ub = true;
    }
  }
  if (!seen_ub) throw DataError("initial vocabulary lacks " + std::string(kBoundarySymbol));
}

TokenId MergeTable::add_merge(TokenId left, TokenId right, double score) {
  const auto size = static_cast<TokenId>(vocabulary_.size());
  if (left < 0 || left >= size || right < 0 || right >= size) throw DataError("merge references an unknown token");
  if (left == boundary_id_ || right == boundary_id_) throw DataError("merges may not involve the boundary token");
  std::string name = vocabulary_[static_cast<std::size_t>(left)] + vocabulary_[static_cast<std::size_t>(right)];
  if (index_.count(name)) throw DataError("merged token '" + name + "' already exists");
  const TokenId id = size;
  index_.emplace(name, id);
  vocabulary_.push_back(std::move(name));
  merges_.push_back(Merge{left, right, id, score});
  return id;
}

std::optional<TokenId> MergeTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> MergeTable::spelling(TokenId token) const {
  if (token < 0 || static_cast<std::size_t>(token) >= vocabulary_.size()) throw DataError("unknown token id");
  if (static_cast<std::size_t>(token) < initial_size_) return {token};
  const Merge& m = merges_[static_cast<std::size_t>(token) - initial_size_];
  auto out = spelling(m.left);
  auto right = spelling(m.right);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

void MergeTable::write_merges(std::ostream& out) const {
  out << kMergesHeader << "\tversion=" << kTokenizerFormatVersion << "\tcriterion=" << criterion_name(criterion_)
      << "\ttarget=" << target_size_ << '\n';
  for (const auto& m : merges_)
    out << vocabulary_[static_cast<std::size_t>(m.left)] << '\t' << vocabulary_[static_cast<std::size_t>(m.right)]
        << '\t' << general17(m.score) << '\n';
}

void MergeTable::write_vocabulary(std::ostream& out) const {
  out << kVocabularyHeader << "\tversion=" << kTokenizerFormatVersion << '\n';
  for (const auto& token : vocabulary_) out << token << '\n';
}

MergeTable MergeTable::read(std::istream& vocabulary, std::istream& merges) {
  std::string line;
  if (!getline_clean(vocabulary, line) ||
      line != std::string(kVocabularyHeader) + "\tversion=" + std::to_string(kTokenizerFormatVersion))
    throw DataError("vocabulary file: missing or unsupported header");
  std::vector<std::string> tokens;
  while (getline_clean(vocabulary, line)) tokens.push_back(line);

  if (!getline_clean(merges, line)) throw DataError("merges file: missing header");
  auto header = split_tabs(line);
  if (header.size() != 4 || header[0] != kMergesHeader ||
      header[1] != "version=" + std::to_string(kTokenizerFormatVersion) || header[2].rfind("criterion=", 0) != 0 ||
      header[3].rfind("target=", 0) != 0)
    throw DataError("merges file: missing or unsupported header");
  const MergeCriterion criterion = parse_criterion(header[2].substr(10));
  std::size_t target = 0;
  {
    const auto& t = header[3];
    auto res = std::from_chars(t.data() + 7, t.data() + t.size(), target);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw DataError("merges file: bad target size");
  }

  std::vector<std::array<std::string, 3>> rows;
  std::size_t line_no = 1;
  while (getline_clean(merges, line)) {
    ++line_no;
    auto parts = split_tabs(line);
    if (parts.size() != 3) throw DataError("merges file line " + std::to_string(line_no) + ": expected 3 fields");
    rows.push_back({parts[0], parts[1], parts[2]});
  }
  if (rows.size() > tokens.size()) throw DataError("merges file lists more merges than the vocabulary holds");

  const std::size_t initial = tokens.size() - rows.size();
  MergeTable table(std::vector<std::string>(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(initial)),
                   criterion, target);
  line_no = 1;
  for (const auto& row : rows) {
    ++line_no;
    const std::string where = "merges file line " + std::to_string(line_no) + ": ";
    auto left = table.find(row[0]);
    auto right = table.find(row[1]);
    if (!left || !right) throw DataError(where + "unknown token");
    double score = 0.0;
    auto res = std::from_chars(row[2].data(), row[2].data() + row[2].size(), score);
    if (res.ec != std::errc() || res.ptr != row[2].data() + row[2].size()) throw DataError(where + "bad score");
    const TokenId id = table.add_merge(*left, *right, score);
    if (table.vocabulary()[static_cast<std::size_t>(id)] != tokens[static_cast<std::size_t>(id)])
      throw DataError(where + "merge result does not match the vocabulary file");
  }
  return table;
}

std::size_t apply_merge(const Merge& merge, std::vector<TokenId>& tokens, std::vector<std::int64_t>* values) {
  std::size_t out = 0;
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < tokens.size(); ++out) {
    if (i + 1 < tokens.size() && tokens[i] == merge.left && tokens[i + 1] == merge.right) {
      tokens[out] = merge.result;
      if (values) (*values)[out] = (*values)[i] + (*values)[i + 1];
      i += 2;
      ++replaced;
    } else {
      tokens[out] = tokens[i];
      if (values) (*values)[out] = (*values)[i];
      ++i;
    }
  }
  tokens.resize(out);
  if (values) values->resize(out);
  return replaced;
}

TokenizerTrainResult train_cue_merges(const PhonemeInventory& inventory, const ScoredStream& stream,
                                      MergeCriterion criterion, const TokenizerOptions& options) {
  if (criterion == MergeCriterion::kFrequency) throw ArgumentError("use train_freq_bpe for frequency merges");
  if (stream.tokens.size() != stream.values.size()) throw DataError("scored stream: token and value counts differ");
  std::vector<std::int64_t> fixed;
  fixed.reserve(stream.values.size());
  for (double x : stream.values) {
    if (!std::isfinite(x) || std::abs(x) > kMaxCueMagnitude)
      throw DataError("scored stream: cue values must be finite with magnitude <= 2^20");
    fixed.push_back(std::llround(x * kCueFixedPointScale));
  }
  return train_merges(inventory, stream.tokens, std::move(fixed), criterion, options);
}

TokenizerTrainResult train_freq_bpe(const PhonemeInventory& inventory, std::span<const TokenId> stream,
                                    const TokenizerOptions& options) {
  return train_merges(inventory, std::vector<TokenId>(stream.begin(), stream.end()),
                      std::vector<std::int64_t>(stream.size(), 0), MergeCriterion::kFrequency, options);
}

std::vector<TokenId> encode(const MergeTable& table, std::span<const TokenId> tokens) {
  const auto size = static_cast<TokenId>(table.vocabulary().size());
  for (TokenId t : tokens)
    if (t < 0 || t >= size) throw DataError("token id " + std::to_string(t) + " is not in the vocabulary");
  std::vector<TokenId> out(tokens.begin(), tokens.end());
  for (const auto& m : table.merges()) apply_merge(m, out);
  return out;
}

}  // namespace segcue
