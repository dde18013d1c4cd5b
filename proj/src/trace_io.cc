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

#include "segcue/trace_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "segcue/common.h"

namespace segcue {

namespace {

constexpr char kVersionKey[] = "segcue_trace_version";

// 17 significant digits, locale independent; -0.0 keeps its sign.
void append_double(std::string& out, double x) {
  if (x == 0.0 && std::signbit(x)) {
    out += "-0.0";
    return;
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

void check_order(std::optional<std::size_t>& last_utt, std::size_t& last_pos, const PositionRecord& r,
                 const std::string& where) {
  if (last_utt) {
    if (r.utt < *last_utt) throw DataError(where + "utterance " + std::to_string(r.utt) + " out of order");
    if (r.utt == *last_utt && r.pos <= last_pos)
      throw DataError(where + "non-monotonic pos " + std::to_string(r.pos) + " in utterance " +
                      std::to_string(r.utt));
  }
  last_utt = r.utt;
  last_pos = r.pos;
}

void check_dim(std::optional<std::size_t>& dim, const PositionRecord& r, const std::string& where) {
  if (!r.embedding) return;
  if (!dim) {
    dim = r.embedding->size();
  } else if (*dim != r.embedding->size()) {
    throw DataError(where + "embedding dimension " + std::to_string(r.embedding->size()) + " differs from " +
                    std::to_string(*dim));
  }
}

}  // namespace

void validate_record(const PositionRecord& r) {
  if (r.pos < 1) throw DataError("pos must be at least 1");
  if (r.token.empty()) throw DataError("token must be non-empty");
  if (!std::isfinite(r.entropy) || r.entropy < 0.0) throw DataError("entropy must be finite and >= 0");
  if (!std::isfinite(r.surprisal) || r.surprisal < 0.0) throw DataError("surprisal must be finite and >= 0");
  if (r.rank < 1) throw DataError("rank must be >= 1");
  if (!(r.ubp >= 0.0 && r.ubp <= 1.0)) throw DataError("ubp must lie in [0, 1]");
  if (r.embedding) {
    if (r.embedding->empty()) throw DataError("embedding must be non-empty when present");
    for (double x : *r.embedding)
      if (!std::isfinite(x)) throw DataError("embedding values must be finite");
  }
}

TraceWriter::TraceWriter(std::ostream& out) : out_(out) {
  out_ << "{\"" << kVersionKey << "\":" << kTraceVersion << "}\n";
}

void TraceWriter::write(const PositionRecord& r) {
  validate_record(r);
  check_order(last_utt_, last_pos_, r, "trace record: ");
  check_dim(embedding_dim_, r, "trace record: ");

  std::string line = "{\"utt\":" + std::to_string(r.utt) + ",\"pos\":" + std::to_string(r.pos) +
                     ",\"token\":" + nlohmann::json(r.token).dump() + ",\"entropy\":";
  append_double(line, r.entropy);
  line += ",\"surprisal\":";
  append_double(line, r.surprisal);
  line += ",\"rank\":" + std::to_string(r.rank) + ",\"ubp\":";
  append_double(line, r.ubp);
  if (r.embedding) {
    line += ",\"emb\":[";
    for (std::size_t i = 0; i < r.embedding->size(); ++i) {
      if (i) line += ',';
      append_double(line, (*r.embedding)[i]);
    }
    line += ']';
  }
  line += "}\n";
  out_ << line;
  if (!out_) throw DataError("trace write failed");
}

TraceReader::TraceReader(std::istream& in) : in_(in) {
  std::string header;
  if (!std::getline(in_, header)) throw DataError("trace line 1: missing version header");
  line_ = 1;
  try {
    auto doc = nlohmann::json::parse(header);
    if (!doc.is_object() || doc.size() != 1 || !doc.contains(kVersionKey))
      throw DataError("trace line 1: malformed version header");
    if (doc.at(kVersionKey) != kTraceVersion)
      throw DataError("trace line 1: unsupported trace version " + doc.at(kVersionKey).dump());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("trace line 1: ") + e.what());
  }
}

std::optional<PositionRecord> TraceReader::next() {
  std::string text;
  if (!std::getline(in_, text)) return std::nullopt;
  ++line_;
  const std::string where = "trace line " + std::to_string(line_) + ": ";
  if (!text.empty() && text.back() == '\r') text.pop_back();

  PositionRecord r;
  try {
    auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw DataError(where + "record must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key != "utt" && key != "pos" && key != "token" && key != "entropy" && key != "surprisal" &&
          key != "rank" && key != "ubp" && key != "emb")
        throw DataError(where + "unexpected key '" + key + "'");
    }
    auto integer = [&](const char* key) -> const nlohmann::json& {
      const auto& v = doc.at(key);
      if (!v.is_number_integer()) throw DataError(where + key + " must be an integer");
      return v;
    };
    auto number = [&](const char* key) -> double {
      const auto& v = doc.at(key);
      if (!v.is_number()) throw DataError(where + key + " must be a number");
      return v.get<double>();
    };
    if (integer("utt").get<std::int64_t>() < 0) throw DataError(where + "utt must be >= 0");
    r.utt = integer("utt").get<std::size_t>();
    if (integer("pos").get<std::int64_t>() < 1) throw DataError(where + "pos must be >= 1");
    r.pos = integer("pos").get<std::size_t>();
    if (!doc.at("token").is_string()) throw DataError(where + "token must be a string");
    r.token = doc.at("token").get<std::string>();
    r.entropy = number("entropy");
    r.surprisal = number("surprisal");
    r.rank = integer("rank").get<std::int64_t>();
    r.ubp = number("ubp");
    if (doc.contains("emb")) {
      const auto& emb = doc.at("emb");
      if (!emb.is_array()) throw DataError(where + "emb must be an array");
      std::vector<double> values;
      values.reserve(emb.size());
      for (const auto& x : emb) {
        if (!x.is_number()) throw DataError(where + "emb entries must be numbers");
        values.push_back(x.get<double>());
      }
      r.embedding = std::move(values);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + e.what());
  }
  try {
    validate_record(r);
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  }
  check_order(last_utt_, last_pos_, r, where);
  check_dim(embedding_dim_, r, where);
  return r;
}

void write_trace(std::ostream& out, std::span<const PositionRecord> records) {
  TraceWriter writer(out);
  for (const auto& r : records) writer.write(r);
}

std::vector<PositionRecord> read_trace(std::istream& in) {
  TraceReader reader(in);
  std::vector<PositionRecord> records;
  while (auto r = reader.next()) records.push_back(std::move(*r));
  return records;
}

std::vector<PositionRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return read_trace(in);
}

void write_trace_file(const std::string& path, std::span<const PositionRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_trace(out, records);
}

}  // namespace segcue
