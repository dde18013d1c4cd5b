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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SEGCUE_CLI;
const std::string kFix = SEGCUE_FIXTURES;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >cli_stdout.txt 2>cli_stderr.txt").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  Scratch() {
    fs::remove_all("cli_scratch");
    fs::create_directories("cli_scratch");
  }
};

}  // namespace

TEST_CASE("exit codes") {
  Scratch s;
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("nonsense") == 1);
  CHECK(run("eval --gold " + kFix + "/fixture_corpus.txt --pred missing.txt") == 1);
  CHECK(slurp("cli_stderr.txt").find("missing.txt") != std::string::npos);
  CHECK(run("grid " + kFix + "/fixture_corpus.txt --predictor ngram:3 --unknown-flag") == 1);
  CHECK(run("grid " + kFix + "/fixture_corpus.txt --predictor bogus:1") == 1);
  CHECK(run("grid " + kFix + "/fixture_corpus.txt") == 1);

  std::ofstream("cli_scratch/bad.txt") << "<UB>\n";
  CHECK(run("ingest cli_scratch/bad.txt") == 2);
  std::ofstream("cli_scratch/short.txt") << "dh ax\n";
  CHECK(run("eval --gold " + kFix + "/fixture_corpus.txt --pred cli_scratch/short.txt") == 2);
  CHECK(run("segment " + kFix + "/fixture_train.txt --trace " + kFix + "/fixture_trace.jsonl") == 2);
}

TEST_CASE("eval of identical files is perfect") {
  CHECK(run("eval --gold " + kFix + "/fixture_corpus.txt --pred " + kFix + "/fixture_corpus.txt") == 0);
  const auto out = slurp("cli_stdout.txt");
  CHECK(out.rfind("true_positives,false_positives,false_negatives,precision,recall,f1\n", 0) == 0);
  CHECK(out.substr(out.size() - 7) == ",1,1,1\n");
}

TEST_CASE("pipeline from synthesis to tokenizer") {
  Scratch s;
  const std::string d = "cli_scratch/";
  REQUIRE(run("synth --lexicon " + kFix + "/trisyllabic_lexicon.txt --n 300 --seed 1 -o " + d + "c.txt") == 0);
  CHECK(fs::exists(d + "c.txt.config.toml"));
  CHECK(slurp(d + "c.txt.config.toml").find("seed=1") != std::string::npos);

  REQUIRE(run("ingest " + d + "c.txt --split 0.8,0.1,0.1 --prefix " + d + "p --seed 3") == 0);
  REQUIRE(run("train-ngram " + d + "p.train.txt --order 4 -o " + d + "m.json") == 0);
  REQUIRE(run("cues " + d + "p.dev.txt --model " + d + "m.json --embedding distribution -o " + d + "dev.jsonl") == 0);
  REQUIRE(run("cues " + d + "p.test.txt --model " + d + "m.json -o " + d + "test.jsonl") == 0);
  REQUIRE(run("tune " + d + "p.dev.txt --trace " + d + "dev.jsonl --cue ubp --strategy threshold") == 0);
  const auto tuned = slurp("cli_stdout.txt");
  CHECK(tuned.rfind("cue,strategy,parameter,", 0) == 0);

  REQUIRE(run("segment " + d + "p.test.txt --trace " + d + "test.jsonl --cue entropy -o " + d + "seg.txt") == 0);
  REQUIRE(run("segment " + d + "p.test.txt --trace " + d + "test.jsonl --cue ubp --strategy threshold --param 0.5 -o " +
              d + "seg2.txt") == 0);
  CHECK(run("segment " + d + "p.test.txt --trace " + d + "test.jsonl --strategy threshold") == 1);
  REQUIRE(run("eval --gold " + d + "p.test.txt --pred " + d + "seg.txt") == 0);
  REQUIRE(run("mcnemar --gold " + d + "p.test.txt --a " + d + "seg.txt --b " + d + "seg2.txt") == 0);
  CHECK(slurp("cli_stdout.txt").rfind("b,c,test,exact_limit,p_value\n", 0) == 0);

  REQUIRE(run("grid " + d + "p.test.txt --trace " + d + "test.jsonl --tune-corpus " + d + "p.dev.txt --tune-trace " +
              d + "dev.jsonl --report " + d + "grid.csv --detail " + d + "detail.csv --best-out " + d + "best.txt") ==
          0);
  const auto grid = slurp(d + "grid.csv");
  CHECK(grid.rfind("cue,peak,threshold,relative\n", 0) == 0);
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 5);
  CHECK(std::count(grid.begin(), grid.end(), '*') == 1);

  REQUIRE(run("probe " + d + "p.dev.txt --trace " + d + "dev.jsonl --epochs 50") == 0);
  CHECK(slurp("cli_stdout.txt").find("\ntoken_identity,") != std::string::npos);
  CHECK(run("probe " + d + "p.test.txt --trace " + d + "test.jsonl") == 2);

  REQUIRE(run("analyze " + d + "p.train.txt " + d + "p.dev.txt " + d + "p.test.txt --frequencies " + d +
              "f.csv --correlations " + d + "r.csv") == 0);
  CHECK(slurp("cli_stdout.txt").find("\np.dev,") != std::string::npos);
  CHECK(slurp(d + "f.csv").rfind("corpus,phoneme,word_final,other\n", 0) == 0);

  REQUIRE(run("tok-train " + d + "p.train.txt --cue ubp --predictor random:1 --vocab-size 30 --merges " + d +
              "u.merges --vocab " + d + "u.vocab") == 0);
  REQUIRE(run("tok-train " + d + "p.train.txt --cue frequency --vocab-size 30 --merges " + d + "f.merges --vocab " +
              d + "f.vocab") == 0);
  CHECK(run("tok-train " + d + "p.train.txt --cue ubp --vocab-size 30 --merges x --vocab y") == 1);
  REQUIRE(run("tok-encode " + d + "p.test.txt --merges " + d + "f.merges --vocab " + d + "f.vocab -o " + d +
              "enc.txt") == 0);
  const auto enc = slurp(d + "enc.txt");
  const auto test = slurp(d + "p.test.txt");
  CHECK(std::count(enc.begin(), enc.end(), '\n') == std::count(test.begin(), test.end(), '\n'));
}

TEST_CASE("dump-config prints without running") {
  CHECK(run("grid nothing.txt --dump-config") == 1);  // inputs are still checked
  CHECK(run("grid " + kFix + "/fixture_corpus.txt --predictor random:2 --seed 9 --dump-config") == 0);
  const auto cfg = slurp("cli_stdout.txt");
  CHECK(cfg.find("predictor=\"random:2\"") != std::string::npos);
  CHECK(cfg.find("seed=9") != std::string::npos);
  CHECK(cfg.find("cue,") == std::string::npos);
}

TEST_CASE("custom delimiters") {
  Scratch s;
  std::ofstream("cli_scratch/d.txt") << "a.b|c\nc|a.b\n";
  REQUIRE(run("ingest cli_scratch/d.txt --phoneme-delim . --word-delim '|' -o cli_scratch/n.txt") == 0);
  CHECK(slurp("cli_scratch/n.txt") == "a.b|c\nc|a.b\n");
}
