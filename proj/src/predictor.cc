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

#include "segcue/predictor.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "segcue/rng.h"

namespace segcue {

namespace {

constexpr int kModelFormatVersion = 1;
constexpr char kModelFormatName[] = "segcue-ngram";

void check_output(std::span<double> out, std::size_t vocab) {
  if (out.size() != vocab)
    throw ArgumentError("distribution buffer has " + std::to_string(out.size()) + " entries, expected " +
                        std::to_string(vocab));
}

}  // namespace

std::vector<double> Predictor::distribution(std::span<const TokenId> context) const {
  std::vector<double> out(vocab_size());
  distribution(context, out);
  return out;
}

NGramModel::NGramModel(PhonemeInventory inventory, int order)
    : order_(order), inventory_(std::move(inventory)), tables_(static_cast<std::size_t>(std::max(order, 0))) {
  if (order < 1) throw ArgumentError("n-gram order must be at least 1");
}

NGramModel NGramModel::train(const PhonemeInventory& inventory, std::span<const TokenId> stream, int order) {
  NGramModel model(inventory, order);
  if (stream.empty()) throw DataError("cannot train an n-gram model on an empty stream");
  const auto v = static_cast<TokenId>(inventory.size());
  for (TokenId t : stream)
    if (t < 0 || t >= v) throw DataError("stream token id " + std::to_string(t) + " outside the inventory");

  std::vector<TokenId> key;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    for (int k = 0; k < order && static_cast<std::size_t>(k) <= i; ++k) {
      key.assign(stream.begin() + static_cast<std::ptrdiff_t>(i - static_cast<std::size_t>(k)),
                 stream.begin() + static_cast<std::ptrdiff_t>(i));
      auto& counts = model.tables_[static_cast<std::size_t>(k)][key];
      ++counts.successors[stream[i]];
      ++counts.total;
    }
  }
  return model;
}

const NGramModel::ContextCounts* NGramModel::context_counts(std::span<const TokenId> context) const {
  if (context.size() >= tables_.size()) return nullptr;
  const auto& table = tables_[context.size()];
  auto it = table.find(std::vector<TokenId>(context.begin(), context.end()));
  return it == table.end() ? nullptr : &it->second;
}

std::uint64_t NGramModel::count(std::span<const TokenId> ngram) const {
  if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return 0;
  const auto* counts = context_counts(ngram.first(ngram.size() - 1));
  if (!counts) return 0;
  auto it = counts->successors.find(ngram.back());
  return it == counts->successors.end() ? 0 : it->second;
}

void NGramModel::distribution(std::span<const TokenId> context, std::span<double> out) const {
  const std::size_t v = vocab_size();
  check_output(out, v);
  std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(v));

  const std::size_t longest = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  for (std::size_t k = 0; k <= longest; ++k) {
    const auto* counts = context_counts(context.last(k));
    // Unseen contexts inherit the lower-order estimate unchanged.
    if (!counts || counts->total == 0) continue;
    const double distinct = static_cast<double>(counts->successors.size());
    const double denom = static_cast<double>(counts->total) + distinct;
    for (double& p : out) p = distinct * p / denom;
    for (const auto& [token, c] : counts->successors)
      out[static_cast<std::size_t>(token)] += static_cast<double>(c) / denom;
  }
}

void NGramModel::save(std::ostream& out) const {
  nlohmann::ordered_json doc;
  doc["format"] = kModelFormatName;
  doc["version"] = kModelFormatVersion;
  doc["order"] = order_;
  doc["inventory"] = inventory_.symbols();
  auto tables = nlohmann::ordered_json::array();
  for (const auto& table : tables_) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [context, counts] : table) {
      auto successors = nlohmann::ordered_json::array();
      for (const auto& [token, c] : counts.successors) successors.push_back({token, c});
      rows.push_back({{"context", context}, {"successors", successors}});
    }
    tables.push_back(std::move(rows));
  }
  doc["tables"] = std::move(tables);
  out << doc.dump() << '\n';
}

NGramModel NGramModel::load(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormatName) throw DataError("model file: unknown format");
    if (doc.at("version").get<int>() != kModelFormatVersion) throw DataError("model file: unsupported version");
    NGramModel model(PhonemeInventory::from_symbols(doc.at("inventory").get<std::vector<std::string>>()),
                     doc.at("order").get<int>());
    const auto& tables = doc.at("tables");
    if (tables.size() != model.tables_.size()) throw DataError("model file: table count does not match order");
    const auto v = static_cast<TokenId>(model.vocab_size());
    for (std::size_t k = 0; k < tables.size(); ++k) {
      for (const auto& row : tables[k]) {
        auto context = row.at("context").get<std::vector<TokenId>>();
        if (context.size() != k) throw DataError("model file: context length mismatch in table " + std::to_string(k));
        ContextCounts counts;
        for (const auto& pair : row.at("successors")) {
          auto token = pair.at(0).get<TokenId>();
          auto c = pair.at(1).get<std::uint64_t>();
          if (token < 0 || token >= v || c < 1) throw DataError("model file: invalid successor entry");
          counts.successors[token] = c;
          counts.total += c;
        }
        model.tables_[k].emplace(std::move(context), std::move(counts));
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

RandomPredictor::RandomPredictor(std::size_t vocab_size, std::uint64_t seed, double alpha)
    : vocab_size_(vocab_size), seed_(seed), alpha_(alpha) {
  if (vocab_size < 1) throw ArgumentError("random predictor needs a non-empty vocabulary");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("Dirichlet concentration must be positive");
}

void RandomPredictor::distribution(std::span<const TokenId> context, std::span<double> out) const {
  distribution_at(context.size(), out);
}

void RandomPredictor::distribution_at(std::size_t position_index, std::span<double> out) const {
  check_output(out, vocab_size_);
  Rng rng(mix_seed(seed_, position_index));
  double total = 0.0;
  for (double& x : out) {
    x = rng.gamma(alpha_);
    total += x;
  }
  if (!(total > 0.0)) {
    // Every gamma draw underflowed (tiny alpha); fall back to a point mass.
    std::fill(out.begin(), out.end(), 0.0);
    out[rng.below(vocab_size_)] = 1.0;
    return;
  }
  for (double& x : out) x /= total;
}

std::vector<double> RandomPredictor::distribution_at(std::size_t position_index) const {
  std::vector<double> out(vocab_size_);
  distribution_at(position_index, out);
  return out;
}

}  // namespace segcue
