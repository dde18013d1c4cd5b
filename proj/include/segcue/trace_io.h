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

#ifndef SEGCUE_TRACE_IO_H_
#define SEGCUE_TRACE_IO_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace segcue {

inline constexpr int kTraceVersion = 1;

// One prediction step of a language model over an utterance.
//
// Position `pos` runs 1..N+1 within utterance `utt`; step N+1 predicts the
// closing <UB>. entropy/surprisal/rank/ubp describe the distribution the model
// produced *before* seeing `token`. The optional embedding is the model state
// *after* consuming `token` (for a final-layer transformer embedding, the
// hidden vector at that token).
struct PositionRecord {
  std::size_t utt = 0;
  std::size_t pos = 1;
  std::string token;
  double entropy = 0.0;
  double surprisal = 0.0;
  std::int64_t rank = 1;
  double ubp = 0.0;
  std::optional<std::vector<double>> embedding;

  bool operator==(const PositionRecord&) const = default;
};

// Range checks on a single record; throws DataError.
void validate_record(const PositionRecord& record);

// JSON Lines writer: a version header line, then one record per line with
// keys utt,pos,token,entropy,surprisal,rank,ubp[,emb] and 17 significant
// digits per float.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out);

  void write(const PositionRecord& record);

 private:
  std::ostream& out_;
  std::optional<std::size_t> last_utt_;
  std::size_t last_pos_ = 0;
  std::optional<std::size_t> embedding_dim_;
};

// Streaming reader; validates ordering and embedding dimensions across the
// file. Errors carry the offending line number.
class TraceReader {
 public:
  explicit TraceReader(std::istream& in);

  std::optional<PositionRecord> next();
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::optional<std::size_t> last_utt_;
  std::size_t last_pos_ = 0;
  std::optional<std::size_t> embedding_dim_;
};

void write_trace(std::ostream& out, std::span<const PositionRecord> records);
std::vector<PositionRecord> read_trace(std::istream& in);

std::vector<PositionRecord> read_trace_file(const std::string& path);
void write_trace_file(const std::string& path, std::span<const PositionRecord> records);

}  // namespace segcue

#endif  // SEGCUE_TRACE_IO_H_
