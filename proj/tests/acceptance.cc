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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "oracles.h"
#include "segcue/analysis.h"
#include "segcue/corpus.h"
#include "segcue/cues.h"
#include "segcue/evaluator.h"
#include "segcue/grid.h"
#include "segcue/predictor.h"
#include "segcue/probe.h"
#include "segcue/rng.h"
#include "segcue/segmenter.h"
#include "segcue/tokenizer.h"

using namespace segcue;
namespace fs = std::filesystem;

namespace {

// Best n-gram cell F1 on the synthetic trisyllabic test split, frozen from a
// reference run: ubp/threshold, 255 true positives, no errors.
constexpr double kPinnedNgramF1 = 1.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Corpus trisyllabic_corpus() {
  Lexicon lex = parse_lexicon(slurp(SEGCUE_FIXTURES "/trisyllabic_lexicon.txt"));
  return synthesize(lex, {4, 8, 1000, 1});
}

Outcome cue_correctness() {
  Rng rng(1);
  double worst = 0;
  bool ranks = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t v = 2 + rng.below(60);
    std::vector<double> q(v);
    for (auto& x : q) x = rng.below(5) == 0 ? 0.0 : rng.gamma(0.5);
    if (rng.below(4) == 0) q[rng.below(v)] = q[rng.below(v)];
    double s = std::accumulate(q.begin(), q.end(), 0.0);
    if (s == 0) q[0] = s = 1;
    for (auto& x : q) x /= s;
    const auto t = static_cast<TokenId>(rng.below(v)), ub = static_cast<TokenId>(rng.below(v));
    auto c = position_cues(q, t, ub);
    const double qt = q[static_cast<std::size_t>(t)];
    const double loss = qt > 0 ? std::min(-std::log2(static_cast<long double>(qt)), 64.0L) : 64.0;
    worst = std::max({worst, std::abs(c.entropy - static_cast<double>(oracle::entropy_bits(q))),
                      std::abs(c.loss - loss), std::abs(c.ubp - q[static_cast<std::size_t>(ub)])});
    ranks = ranks && c.rank == oracle::rank_of(q, t);
  }
  return {worst <= 1e-9 && ranks, "max abs error " + fmt(worst) + ", ranks exact: " + (ranks ? "yes" : "no")};
}

Outcome strategy_semantics() {
  Rng rng(2);
  std::size_t mismatches = 0, adjacent = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> c(1 + rng.below(30));
    for (auto& x : c) x = rng.below(3) == 0 ? static_cast<double>(rng.below(3)) : rng.uniform();
    const double theta = rng.uniform(), delta = rng.uniform() * 2 - 1;
    const std::size_t n = c.size() - 1;
    BoundaryVector peak(n), thr(n), rel(n);
    // c is 0-based here: c[i-1] is the cue at position i.
    for (std::size_t i = 1; i <= n; ++i) {
      const bool first = i == 1;
      peak[i - 1] = first || (c[i - 1] > c[i - 2] && c[i - 1] > c[i]);
      thr[i - 1] = first || c[i - 1] >= theta;
      rel[i - 1] = first || c[i - 1] - c[i - 2] >= delta;
    }
    auto p = place_peak(c);
    mismatches += (p != peak) + (place_threshold(c, theta) != thr) + (place_relative(c, delta) != rel);
    for (std::size_t k = 2; k < p.size(); ++k) adjacent += p[k] && p[k - 1];
  }
  return {mismatches == 0 && adjacent == 0,
          std::to_string(mismatches) + " mismatches, " + std::to_string(adjacent) + " adjacent peaks"};
}

Outcome segmentation_learns() {
  Corpus c = trisyllabic_corpus();
  auto parts = split(c, {0.9, 0.05, 0.05}, 1);
  auto ngram = NGramModel::train(parts.train.inventory, strip_boundaries(parts.train), 5);
  RandomPredictor random(c.inventory.size(), 1);

  GridOptions opts;
  opts.threads = 4;
  auto run = [&](const Predictor& p) {
    auto dev = compute_cues(p, parts.dev);
    auto test = compute_cues(p, parts.test);
    return run_grid(parts.dev, dev, parts.test, test, opts);
  };
  auto g_ngram = run(ngram);
  auto g_random = run(random);
  const auto& a = g_ngram.best();
  const auto& b = g_random.best();
  auto m = mcnemar(parts.test, a.segmentation.boundaries, b.segmentation.boundaries);
  const double exact = oracle::binomial_two_sided(static_cast<long>(m.b), static_cast<long>(m.c));
  const bool pinned = std::abs(a.score.f1() - kPinnedNgramF1) <= 1e-12;
  return {a.score.f1() > b.score.f1() && exact < 0.05 && m.p_value < 0.05 && pinned,
          "ngram best " + std::string(cue_name(a.cue)) + "/" + std::string(strategy_name(a.strategy)) +
              " F1=" + fmt(a.score.f1()) + " (pinned " + fmt(kPinnedNgramF1) + "), random best " +
              std::string(cue_name(b.cue)) + "/" + std::string(strategy_name(b.strategy)) + " F1=" +
              fmt(b.score.f1()) + ", mcnemar b=" + std::to_string(m.b) + " c=" + std::to_string(m.c) +
              " exact p=" + fmt(exact) + " reported p=" + fmt(m.p_value) + (m.exact ? " (exact)" : " (chi2)")};
}

Outcome word_length_confound() {
  std::vector<double> lengths, f1s;
  std::string detail;
  for (std::size_t len : {2u, 3u, 4u, 6u}) {
    Corpus c = synthesize(random_lexicon(len, 10, 12, 1), {4, 8, 1000, 1});
    auto parts = split(c, {0.8, 0.1, 0.1}, 1);
    RandomPredictor p(c.inventory.size(), 1);
    auto dev = compute_cues(p, parts.dev);
    auto test = compute_cues(p, parts.test);
    auto tuned = tune(parts.dev, dev, CueKind::kUbp, Strategy::kRelative);
    const double f1 =
        score(parts.test, segment(test, CueKind::kUbp, Strategy::kRelative, tuned.parameter).boundaries).f1();
    lengths.push_back(static_cast<double>(len));
    f1s.push_back(f1);
    detail += "L=" + std::to_string(len) + " F1=" + fmt(f1) + ", ";
  }
  const double r = pearson(lengths, f1s);
  return {r < -0.8, detail + "pearson=" + fmt(r)};
}

Outcome evaluator_exactness() {
  auto s = score_utterance(BoundaryVector{1, 1, 0, 1, 0}, BoundaryVector{1, 1, 0, 0, 0});
  auto m = mcnemar_test(1, 7);
  const bool ok = s.precision() == 1.0 && s.recall() == 0.5 && s.f1() == 2.0 / 3.0 && m.p_value == 0.0703125;
  return {ok, "P=" + fmt(s.precision()) + " R=" + fmt(s.recall()) + " F1=" + fmt(s.f1()) + " p=" +
                  fmt(m.p_value)};
}

std::vector<ProbeExample> gaussian_examples(Rng& rng, std::size_t n) {
  std::vector<ProbeExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    ProbeExample e;
    e.word_final = rng.below(2) == 1;
    e.word_type = "w" + std::to_string(rng.below(60));
    for (int j = 0; j < 8; ++j) e.embedding.push_back(rng.normal());
    e.embedding[0] += e.word_final ? 3.0 : -3.0;
    out.push_back(std::move(e));
  }
  return out;
}

Outcome probe_checks() {
  Rng rng(6);
  auto examples = gaussian_examples(rng, 4000);
  auto data = split_probe_examples(examples, 1);
  const double separable = probe_accuracy(train_probe(data.train), data.test).overall;

  double shuffled_sum = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto shuffled = examples;
    std::vector<std::uint8_t> labels;
    for (auto& e : shuffled) labels.push_back(e.word_final);
    Rng perm(mix_seed(seed, 99));
    perm.shuffle(std::span(labels));
    for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].word_final = labels[i];
    auto d = split_probe_examples(std::move(shuffled), seed);
    shuffled_sum += probe_accuracy(train_probe(d.train), d.test).overall;
  }
  const double shuffled = shuffled_sum / 20;

  double worst_grad = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng.below(40), dim = 1 + rng.below(8);
    std::vector<double> x(n * dim), w(dim);
    std::vector<std::uint8_t> y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : w) v = rng.normal();
    for (auto& v : y) v = static_cast<std::uint8_t>(rng.below(2));
    const double b = rng.normal(), h = 1e-5;
    std::vector<double> g;
    double gb = 0;
    logistic_loss(w, b, x, y, &g, &gb);
    auto rel = [](double a, double e) { return std::abs(a - e) / std::max(1e-8, std::abs(a) + std::abs(e)); };
    for (std::size_t j = 0; j < dim; ++j) {
      auto wp = w, wm = w;
      wp[j] += h;
      wm[j] -= h;
      worst_grad = std::max(worst_grad, rel(g[j], (logistic_loss(wp, b, x, y) - logistic_loss(wm, b, x, y)) / (2 * h)));
    }
    worst_grad = std::max(worst_grad, rel(gb, (logistic_loss(w, b + h, x, y) - logistic_loss(w, b - h, x, y)) / (2 * h)));
  }

  bool disjoint = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto d = split_probe_examples(examples, seed);
    std::set<std::string> train;
    for (auto& e : d.train) train.insert(e.word_type);
    for (auto& e : d.test) disjoint = disjoint && !train.count(e.word_type);
  }
  return {separable >= 0.99 && std::abs(shuffled - 0.5) <= 0.03 && worst_grad <= 1e-6 && disjoint,
          "separable=" + fmt(separable) + " shuffled mean=" + fmt(shuffled) + " grad rel err=" + fmt(worst_grad) +
              " disjoint=" + (disjoint ? "yes" : "no")};
}

Outcome analysis_exactness() {
  const double uniform = normalized_entropy(distribution_from_counts(std::vector<double>(12, 1.0)));
  PhonemeDistribution point{std::vector<double>(12, 0.0), 12};
  point.weights[4] = 1.0;
  const double mass = normalized_entropy(point);
  std::vector<double> x{1, 2, 3, 4, 5}, up{2, 4, 6, 8, 10}, down{9, 7, 5, 3, 1};
  const double rp = pearson(x, up), rn = pearson(x, down);
  return {uniform == 1.0 && mass == 0.0 && std::abs(rp - 1) <= 1e-12 && std::abs(rn + 1) <= 1e-12,
          "uniform=" + fmt(uniform) + " point=" + fmt(mass) + " r+=" + fmt(rp) + " r-=" + fmt(rn)};
}

Outcome tokenizer_invariants() {
  Corpus c = trisyllabic_corpus();
  auto model = NGramModel::train(c.inventory, strip_boundaries(c), 5);
  auto stream = scored_stream(c, compute_cues(model, c), CueKind::kUbp);
  auto r = train_cue_merges(c.inventory, stream, MergeCriterion::kUbp, {100, 1});
  bool mass = true, shrinking = true, no_ub = true;
  std::size_t prev = stream.tokens.size();
  for (auto& step : r.steps) {
    mass = mass && step.mass_after == r.initial_mass;
    shrinking = shrinking && step.tokens_after < prev;
    prev = step.tokens_after;
  }
  const bool encoded = encode(r.table, stream.tokens) == r.final_tokens;
  for (std::size_t id = r.table.initial_size(); id < r.table.vocabulary().size(); ++id)
    no_ub = no_ub && r.table.vocabulary()[id].find(kBoundarySymbol) == std::string::npos;

  const auto plain = strip_boundaries(c);
  auto freq = train_freq_bpe(c.inventory, plain, {100, 1});
  std::vector<std::string> names;
  for (auto t : plain) names.push_back(c.inventory.symbol(t));
  const auto& syms = c.inventory.symbols();
  auto ref = oracle::frequency_bpe(names, std::set<std::string>(syms.begin(), syms.end()), 100,
                                   std::string(kBoundarySymbol));
  const bool bpe = freq.final_tokens.size() == ref.tokens.size();
  return {mass && shrinking && encoded && no_ub && bpe,
          std::to_string(r.steps.size()) + " cue merges; mass conserved=" + (mass ? "yes" : "no") +
              " shrinking=" + (shrinking ? "yes" : "no") + " encode=" + (encoded ? "yes" : "no") +
              " no <UB>=" + (no_ub ? "yes" : "no") + "; bpe tokens " + std::to_string(freq.final_tokens.size()) +
              " vs reference " + std::to_string(ref.tokens.size())};
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const std::string cli = SEGCUE_CLI, fix = SEGCUE_FIXTURES;
  const std::vector<std::string> commands = {
      "synth --lexicon " + fix + "/trisyllabic_lexicon.txt --n 400 --seed 5 -o c.txt",
      "ingest c.txt --split 0.8,0.1,0.1 --prefix p --seed 5 -o -",
      "train-ngram p.train.txt --order 5 -o m.json",
      "cues p.dev.txt --model m.json --embedding distribution -o dev.jsonl",
      "cues p.test.txt --model m.json -o test.jsonl",
      "segment p.test.txt --trace test.jsonl --cue ubp -o seg.txt",
      "segment p.test.txt --trace test.jsonl --cue loss --strategy relative --param 0.5 -o seg2.txt",
      "tune p.dev.txt --trace dev.jsonl --cue entropy --strategy threshold -o tune.csv",
      "eval --gold p.test.txt --pred seg.txt -o eval.csv",
      "grid c.txt --predictor ngram:5 --threads 4 --report grid_ngram.csv --detail detail.csv",
      "grid c.txt --predictor random:1 --seed 5 --threads 3 --report grid_random.csv --best-out best.txt",
      "probe p.dev.txt --trace dev.jsonl --seed 5 -o probe.csv",
      "analyze p.train.txt p.dev.txt p.test.txt --report stats.csv --frequencies freq.csv --correlations corr.csv",
      "mcnemar --gold p.test.txt --a seg.txt --b seg2.txt -o mcnemar.csv",
      "tok-train p.train.txt --cue ubp --model m.json --vocab-size 60 --merges u.merges --vocab u.vocab",
      "tok-train p.train.txt --cue frequency --vocab-size 60 --merges f.merges --vocab f.vocab",
      "tok-encode p.test.txt --merges u.merges --vocab u.vocab -o enc.txt",
  };
  std::set<std::string> subcommands;
  for (const char* dir : {"determinism_a", "determinism_b"}) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      const std::string cmd = "cd " + std::string(dir) + " && " + cli + " " + commands[i] + " >stdout_" +
                              std::to_string(i) + ".txt 2>stderr_" + std::to_string(i) + ".txt";
      if (shell(cmd) != 0) return {false, "command failed: " + commands[i]};
      subcommands.insert(commands[i].substr(0, commands[i].find(' ')));
    }
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator("determinism_a")) {
    const auto name = entry.path().filename().string();
    ++files;
    if (slurp(entry.path().string()) != slurp("determinism_b/" + name)) {
      ++differing;
      std::fprintf(stderr, "differs: %s\n", name.c_str());
    }
  }
  return {differing == 0 && subcommands.size() == 13,
          std::to_string(subcommands.size()) + " subcommands, " + std::to_string(files) + " output files, " +
              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: none stated
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "cue correctness", 5, cue_correctness},
      {2, "strategy semantics", 10, strategy_semantics},
      {3, "segmentation learns structure", 60, segmentation_learns},
      {4, "word-length confound", 60, word_length_confound},
      {5, "evaluator exactness", 0, evaluator_exactness},
      {6, "probe", 30, probe_checks},
      {7, "analysis", 0, analysis_exactness},
      {8, "tokenizer invariants", 60, tokenizer_invariants},
      {9, "CLI determinism", 0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    std::printf("%s %d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
