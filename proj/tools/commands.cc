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

#include "commands.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "segcue/analysis.h"
#include "segcue/corpus.h"
#include "segcue/cues.h"
#include "segcue/evaluator.h"
#include "segcue/grid.h"
#include "segcue/predictor.h"
#include "segcue/probe.h"
#include "segcue/segmenter.h"
#include "segcue/tokenizer.h"
#include "segcue/trace_io.h"

namespace segcue::cli {

namespace {

std::string general17(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// "\t" and "\s" spell tab and space on the command line.
std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char c = s[++i];
      if (c == 't') out += '\t';
      else if (c == 's') out += ' ';
      else if (c == 'n') out += '\n';
      else if (c == '\\') out += '\\';
      else throw ArgumentError(std::string("unknown escape \\") + c + " in delimiter");
    } else {
      out += s[i];
    }
  }
  return out;
}

struct Format {
  std::string phoneme = " ";
  std::string word = "\\t";

  Delimiters delimiters() const { return Delimiters{unescape(word), unescape(phoneme)}; }
};

void add_format(CLI::App* sub, Format& f) {
  sub->add_option("--phoneme-delim", f.phoneme, "Separator between phonemes (\\t, \\s escapes)")->capture_default_str();
  sub->add_option("--word-delim", f.word, "Separator between words (\\t, \\s escapes)")->capture_default_str();
}

CLI::Option* add_input(CLI::App* sub, const std::string& name, std::string& path, const std::string& help) {
  return sub->add_option(name, path, help)->check(CLI::ExistingFile);
}

void report_diagnostics(const std::string& path, const std::vector<std::string>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << path << ": " << d << "\n";
}

Corpus load_corpus(const std::string& path, const Format& f, PhonemeInventory base = {}) {
  std::vector<std::string> diagnostics;
  Corpus c = read_corpus(path, f.delimiters(), &diagnostics, std::move(base));
  report_diagnostics(path, diagnostics);
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

SplitFractions parse_split(const std::vector<double>& v) {
  if (v.size() != 3) throw ArgumentError("--split takes three fractions train,dev,test");
  return SplitFractions{v[0], v[1], v[2]};
}

struct PredictorSpec {
  enum Kind { kNgram, kRandom } kind = kNgram;
  int order = 5;
  double alpha = 1.0;
};

PredictorSpec parse_predictor(const std::string& text) {
  PredictorSpec spec;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto number = [&](auto& out) {
    if (arg.empty()) return;
    auto res = std::from_chars(arg.data(), arg.data() + arg.size(), out);
    if (res.ec != std::errc() || res.ptr != arg.data() + arg.size())
      throw ArgumentError("bad predictor argument '" + arg + "'");
  };
  if (name == "ngram") {
    spec.kind = PredictorSpec::kNgram;
    number(spec.order);
    if (spec.order < 1) throw ArgumentError("n-gram order must be at least 1");
  } else if (name == "random") {
    spec.kind = PredictorSpec::kRandom;
    number(spec.alpha);
    if (!(spec.alpha > 0.0)) throw ArgumentError("random predictor alpha must be positive");
  } else {
    throw ArgumentError("unknown predictor '" + text + "' (expected ngram:N or random:ALPHA)");
  }
  return spec;
}

NGramModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return NGramModel::load(in);
}

// The model's inventory is the ingest base, so ids agree; new symbols are an error.
Corpus load_corpus_for_model(const std::string& path, const Format& f, const NGramModel& model) {
  Corpus c = load_corpus(path, f, model.inventory());
  if (c.inventory.size() != model.inventory().size())
    throw DataError(path + ": phoneme '" + c.inventory.symbol(static_cast<TokenId>(model.inventory().size())) +
                    "' is unknown to the model");
  return c;
}

std::vector<CueTrack> load_tracks(const Corpus& corpus, const std::string& trace_path) {
  const auto records = read_trace_file(trace_path);
  return tracks_from_records(corpus, records);
}

std::string score_header() { return "true_positives,false_positives,false_negatives,precision,recall,f1"; }

std::string score_row(const BoundaryScore& s) {
  return std::to_string(s.true_positives) + "," + std::to_string(s.false_positives) + "," +
         std::to_string(s.false_negatives) + "," + general17(s.precision()) + "," + general17(s.recall()) + "," +
         general17(s.f1());
}

// Reads a predicted segmentation over the same phonemes as gold.
std::vector<BoundaryVector> load_segmentation(const Corpus& gold, const std::string& path, const Format& f) {
  Corpus pred = load_corpus(path, f, gold.inventory);
  if (pred.utterances.size() != gold.utterances.size())
    throw DataError(path + ": " + std::to_string(pred.utterances.size()) + " utterances, gold has " +
                    std::to_string(gold.utterances.size()));
  std::vector<BoundaryVector> out;
  out.reserve(pred.utterances.size());
  for (std::size_t u = 0; u < pred.utterances.size(); ++u) {
    if (pred.utterances[u].tokens != gold.utterances[u].tokens)
      throw DataError(path + ": utterance " + std::to_string(u) + " has different phonemes from gold");
    out.push_back(std::move(pred.utterances[u].boundaries));
  }
  return out;
}

Command make(CLI::App* sub, std::shared_ptr<void> state, std::function<void()> run,
             std::function<std::string()> primary, bool* dump) {
  sub->add_flag("--dump-config", *dump, "Print the resolved configuration and exit");
  // Keep the options alive as long as the command.
  return Command{sub, [state, run] { run(); }, [state, primary] { return primary(); }, dump};
}

// ---------------------------------------------------------------------------

Command ingest_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string input, output = "-", prefix;
    std::size_t max_tokens = 0;
    std::vector<double> split;
    std::uint64_t seed = 1;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("ingest", "Normalize a corpus, optionally truncate and split it");
  add_input(sub, "input", o->input, "Corpus text file")->required();
  add_format(sub, o->format);
  sub->add_option("-o,--output", o->output, "Normalized corpus (- for stdout)")->capture_default_str();
  sub->add_option("--max-tokens", o->max_tokens, "Keep whole utterances up to this many phonemes (0 = all)")
      ->capture_default_str();
  sub->add_option("--split", o->split, "train,dev,test fractions; writes PREFIX.{train,dev,test}.txt")
      ->delimiter(',')
      ->expected(3);
  sub->add_option("--prefix", o->prefix, "Output prefix for --split");
  sub->add_option("--seed", o->seed, "Seed for the split")->capture_default_str();
  return make(
      sub, o,
      [o] {
        Corpus c = load_corpus(o->input, o->format);
        if (o->max_tokens > 0) c = subsample(c, o->max_tokens);
        const Delimiters d = o->format.delimiters();
        if (o->split.empty()) {
          write_output(o->output, render(c, d));
        } else {
          if (o->prefix.empty()) throw ArgumentError("--split needs --prefix");
          auto parts = split(c, parse_split(o->split), o->seed);
          write_output(o->prefix + ".train.txt", render(parts.train, d));
          write_output(o->prefix + ".dev.txt", render(parts.dev, d));
          write_output(o->prefix + ".test.txt", render(parts.test, d));
        }
        std::cerr << "utterances=" << c.utterances.size() << " phonemes=" << c.token_count()
                  << " words=" << c.word_count() << " inventory=" << c.inventory.size() - 1 << "\n";
      },
      [o] { return o->split.empty() ? o->output : o->prefix + ".train.txt"; }, &o->dump);
}

Command synth_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string lexicon, output = "-", lexicon_out;
    std::size_t word_length = 0, lexicon_size = 6, alphabet = 12;
    SynthesisOptions synthesis;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Generate a corpus by sampling words from a lexicon");
  auto* lex = add_input(sub, "--lexicon", o->lexicon, "Lexicon file: one word per line, phonemes separated");
  auto* len = sub->add_option("--word-length", o->word_length, "Generate a random lexicon of fixed word length");
  lex->excludes(len);
  sub->add_option("--lexicon-size", o->lexicon_size, "Words in a generated lexicon")->capture_default_str();
  sub->add_option("--alphabet", o->alphabet, "Phonemes available to a generated lexicon")->capture_default_str();
  sub->add_option("--lexicon-out", o->lexicon_out, "Also write the lexicon used");
  sub->add_option("--n", o->synthesis.n_utterances, "Number of utterances")->capture_default_str();
  sub->add_option("--min-words", o->synthesis.min_words, "Minimum words per utterance")->capture_default_str();
  sub->add_option("--max-words", o->synthesis.max_words, "Maximum words per utterance")->capture_default_str();
  sub->add_option("--seed", o->synthesis.seed, "Random seed")->capture_default_str();
  sub->add_option("-o,--output", o->output, "Corpus output (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        const Delimiters d = o->format.delimiters();
        Lexicon lexicon;
        if (!o->lexicon.empty())
          lexicon = parse_lexicon(read_file(o->lexicon), d.phoneme);
        else if (o->word_length > 0)
          lexicon = random_lexicon(o->word_length, o->lexicon_size, o->alphabet, o->synthesis.seed);
        else
          throw ArgumentError("need --lexicon or --word-length");
        if (!o->lexicon_out.empty()) {
          std::string text;
          for (const auto& w : lexicon) {
            for (std::size_t i = 0; i < w.size(); ++i) text += (i ? d.phoneme : "") + w[i];
            text += "\n";
          }
          write_output(o->lexicon_out, text);
        }
        write_output(o->output, render(synthesize(lexicon, o->synthesis), d));
      },
      [o] { return o->output; }, &o->dump);
}

Command train_ngram_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string input, output;
    int order = 5;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train-ngram", "Train an interpolated n-gram phoneme model");
  add_input(sub, "corpus", o->input, "Training corpus")->required();
  sub->add_option("--order", o->order, "n-gram order")->capture_default_str()->check(CLI::Range(1, 32));
  sub->add_option("-o,--output", o->output, "Model JSON")->required();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        Corpus c = load_corpus(o->input, o->format);
        std::ostringstream out;
        NGramModel::train(c.inventory, strip_boundaries(c), o->order).save(out);
        write_output(o->output, out.str());
      },
      [o] { return o->output; }, &o->dump);
}

// Predictor options shared by cues and tok-train.
struct CueSource {
  std::string model, predictor, train, trace;
  double loss_ceiling = kDefaultLossCeiling;
  std::uint64_t seed = 1;

  void add(CLI::App* sub, bool allow_trace) {
    add_input(sub, "--model", model, "Trained n-gram model (from train-ngram)");
    sub->add_option("--predictor", predictor, "ngram:N (with --train) or random:ALPHA");
    add_input(sub, "--train", train, "Training corpus for --predictor ngram:N");
    if (allow_trace) add_input(sub, "--trace", trace, "Read cues from a JSONL trace instead of a predictor");
    sub->add_option("--loss-ceiling", loss_ceiling, "Cap on per-position loss in bits")->capture_default_str();
    sub->add_option("--seed", seed, "Seed for the random predictor")->capture_default_str();
  }

  // Loads the corpus with the inventory the cue source requires and computes its tracks.
  std::pair<Corpus, std::vector<CueTrack>> load(const std::string& path, const Format& f, bool embeddings) const {
    const int sources = !model.empty() + !predictor.empty() + !trace.empty();
    if (sources != 1) throw ArgumentError("give exactly one of --model, --predictor" +
                                          std::string(trace.empty() ? "" : ", --trace"));
    CueOptions opts;
    opts.loss_ceiling = loss_ceiling;
    opts.distribution_embeddings = embeddings;
    if (!trace.empty()) {
      Corpus c = load_corpus(path, f);
      auto tracks = load_tracks(c, trace);
      return {std::move(c), std::move(tracks)};
    }
    if (!model.empty()) {
      if (!train.empty()) throw ArgumentError("--train only applies to --predictor ngram:N");
      NGramModel m = load_model(model);
      Corpus c = load_corpus_for_model(path, f, m);
      auto tracks = compute_cues(m, c, opts);
      return {std::move(c), std::move(tracks)};
    }
    const PredictorSpec spec = parse_predictor(predictor);
    if (spec.kind == PredictorSpec::kRandom) {
      if (!train.empty()) throw ArgumentError("--train only applies to --predictor ngram:N");
      Corpus c = load_corpus(path, f);
      RandomPredictor p(c.inventory.size(), seed, spec.alpha);
      auto tracks = compute_cues(p, c, opts);
      return {std::move(c), std::move(tracks)};
    }
    if (train.empty()) throw ArgumentError("--predictor ngram:N needs --train");
    Corpus t = load_corpus(train, f);
    Corpus c = load_corpus(path, f, t.inventory);
    // c's inventory extends t's, so training ids stay valid.
    NGramModel m = NGramModel::train(c.inventory, strip_boundaries(t), spec.order);
    auto tracks = compute_cues(m, c, opts);
    return {std::move(c), std::move(tracks)};
  }
};

Command cues_command(CLI::App& app) {
  struct Opts {
    Format format;
    CueSource source;
    std::string input, output = "-", embedding = "none";
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("cues", "Compute per-position cues and write a JSONL trace");
  add_input(sub, "corpus", o->input, "Corpus to score")->required();
  o->source.add(sub, false);
  sub->add_option("--embedding", o->embedding, "none, or distribution (next-phoneme distribution as embedding)")
      ->check(CLI::IsMember({"none", "distribution"}))
      ->capture_default_str();
  sub->add_option("-o,--output", o->output, "Trace JSONL (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        auto [corpus, tracks] = o->source.load(o->input, o->format, o->embedding == "distribution");
        std::size_t capped = 0;
        for (const auto& t : tracks) capped += t.capped_losses;
        if (capped > 0) std::cerr << "warning: " << capped << " losses capped at " << o->source.loss_ceiling << "\n";
        std::ostringstream out;
        write_trace(out, to_records(corpus, tracks));
        write_output(o->output, out.str());
      },
      [o] { return o->output; }, &o->dump);
}

struct CueChoice {
  std::string cue = "ubp", strategy = "peak";

  void add(CLI::App* sub) {
    sub->add_option("--cue", cue, "entropy, loss, rank or ubp")->capture_default_str();
    sub->add_option("--strategy", strategy, "peak, threshold or relative")->capture_default_str();
  }
};

Command segment_command(CLI::App& app) {
  struct Opts {
    Format format;
    CueChoice choice;
    std::string input, trace, output = "-";
    std::optional<double> param;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("segment", "Place boundaries from a trace with one cue and strategy");
  add_input(sub, "corpus", o->input, "Corpus the trace was computed on")->required();
  add_input(sub, "--trace", o->trace, "Trace JSONL")->required();
  o->choice.add(sub);
  sub->add_option("--param", o->param, "Threshold or relative delta (see `tune`)");
  sub->add_option("-o,--output", o->output, "Segmented corpus (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        const CueKind cue = parse_cue(o->choice.cue);
        const Strategy strategy = parse_strategy(o->choice.strategy);
        if (strategy != Strategy::kPeak && !o->param)
          throw ArgumentError(std::string(strategy_name(strategy)) + " needs --param");
        if (strategy == Strategy::kPeak && o->param) throw ArgumentError("peak takes no --param");
        Corpus c = load_corpus(o->input, o->format);
        auto tracks = load_tracks(c, o->trace);
        auto seg = segment(tracks, cue, strategy, o->param);
        write_output(o->output, render(c, seg.boundaries, o->format.delimiters()));
      },
      [o] { return o->output; }, &o->dump);
}

Command tune_command(CLI::App& app) {
  struct Opts {
    Format format;
    CueChoice choice;
    std::string input, trace, output = "-";
    std::size_t candidates = kDefaultTuningCandidates;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("tune", "Pick the threshold or delta that maximizes boundary F1");
  add_input(sub, "corpus", o->input, "Gold corpus for tuning")->required();
  add_input(sub, "--trace", o->trace, "Trace JSONL for the corpus")->required();
  o->choice.add(sub);
  o->choice.strategy = "threshold";
  sub->add_option("--candidates", o->candidates, "Quantile candidates to try")->capture_default_str();
  sub->add_option("-o,--output", o->output, "CSV (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        const CueKind cue = parse_cue(o->choice.cue);
        const Strategy strategy = parse_strategy(o->choice.strategy);
        if (strategy == Strategy::kPeak) throw ArgumentError("peak has no parameter to tune");
        Corpus c = load_corpus(o->input, o->format);
        auto tracks = load_tracks(c, o->trace);
        auto result = tune(c, tracks, cue, strategy, o->candidates);
        write_output(o->output, "cue,strategy,parameter," + score_header() + "\n" + std::string(cue_name(cue)) +
                                    "," + std::string(strategy_name(strategy)) + "," +
                                    general17(result.parameter) + "," + score_row(result.score) + "\n");
      },
      [o] { return o->output; }, &o->dump);
}

Command eval_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string gold, pred, output = "-";
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval", "Boundary precision, recall and F1 against gold");
  add_input(sub, "--gold", o->gold, "Gold segmented corpus")->required();
  add_input(sub, "--pred", o->pred, "Predicted segmentation of the same phonemes")->required();
  sub->add_option("-o,--output", o->output, "CSV (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        Corpus gold = load_corpus(o->gold, o->format);
        auto pred = load_segmentation(gold, o->pred, o->format);
        write_output(o->output, score_header() + "\n" + score_row(score(gold, pred)) + "\n");
      },
      [o] { return o->output; }, &o->dump);
}

Command grid_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string input, predictor, trace, tune_corpus, tune_trace, report = "-", detail, best_out;
    std::vector<double> split = {0.8, 0.1, 0.1};
    std::size_t candidates = kDefaultTuningCandidates;
    double loss_ceiling = kDefaultLossCeiling;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("grid", "Evaluate every cue x strategy cell");
  add_input(sub, "corpus", o->input, "Gold corpus")->required();
  auto* pred = sub->add_option("--predictor", o->predictor,
                               "ngram:N or random:ALPHA; splits the corpus, tunes on dev, scores test");
  auto* trace = add_input(sub, "--trace", o->trace, "Trace for the corpus; the whole corpus is scored");
  pred->excludes(trace);
  add_input(sub, "--tune-corpus", o->tune_corpus, "Tuning corpus for --trace mode (default: the corpus itself)");
  add_input(sub, "--tune-trace", o->tune_trace, "Trace for --tune-corpus");
  sub->add_option("--split", o->split, "train,dev,test fractions")->delimiter(',')->expected(3)->capture_default_str();
  sub->add_option("--candidates", o->candidates, "Quantile candidates per tuned cell")->capture_default_str();
  sub->add_option("--loss-ceiling", o->loss_ceiling, "Cap on per-position loss in bits")->capture_default_str();
  sub->add_option("--seed", o->seed, "Seed for the split and the random predictor")->capture_default_str();
  sub->add_option("--threads", o->threads, "Worker threads across cells")->capture_default_str()->check(
      CLI::Range(1u, 1024u));
  sub->add_option("--report", o->report, "F1 grid CSV (- for stdout)")->capture_default_str();
  sub->add_option("--detail", o->detail, "Per-cell counts and parameters CSV");
  sub->add_option("--best-out", o->best_out, "Segmentation of the best cell");
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        Corpus tune_corpus, eval_corpus;
        std::vector<CueTrack> tune_tracks, eval_tracks;
        if (!o->predictor.empty()) {
          if (!o->tune_corpus.empty() || !o->tune_trace.empty())
            throw ArgumentError("--tune-corpus/--tune-trace only apply with --trace");
          const PredictorSpec spec = parse_predictor(o->predictor);
          Corpus c = load_corpus(o->input, o->format);
          auto parts = split(c, parse_split(o->split), o->seed);
          CueOptions opts;
          opts.loss_ceiling = o->loss_ceiling;
          std::unique_ptr<Predictor> p;
          if (spec.kind == PredictorSpec::kNgram)
            p = std::make_unique<NGramModel>(
                NGramModel::train(parts.train.inventory, strip_boundaries(parts.train), spec.order));
          else
            p = std::make_unique<RandomPredictor>(c.inventory.size(), o->seed, spec.alpha);
          tune_tracks = compute_cues(*p, parts.dev, opts);
          eval_tracks = compute_cues(*p, parts.test, opts);
          tune_corpus = std::move(parts.dev);
          eval_corpus = std::move(parts.test);
        } else if (!o->trace.empty()) {
          eval_corpus = load_corpus(o->input, o->format);
          eval_tracks = load_tracks(eval_corpus, o->trace);
          if (o->tune_corpus.empty() != o->tune_trace.empty())
            throw ArgumentError("--tune-corpus and --tune-trace go together");
          if (o->tune_corpus.empty()) {
            tune_corpus = eval_corpus;
            tune_tracks = eval_tracks;
          } else {
            tune_corpus = load_corpus(o->tune_corpus, o->format);
            tune_tracks = load_tracks(tune_corpus, o->tune_trace);
          }
        } else {
          throw ArgumentError("need --predictor or --trace");
        }
        GridOptions gopts;
        gopts.n_candidates = o->candidates;
        gopts.threads = o->threads;
        auto grid = run_grid(tune_corpus, tune_tracks, eval_corpus, eval_tracks, gopts);
        write_output(o->report, grid_csv(grid));
        if (!o->detail.empty()) write_output(o->detail, grid_detail_csv(grid));
        if (!o->best_out.empty())
          write_output(o->best_out, render(eval_corpus, grid.best().segmentation.boundaries, o->format.delimiters()));
      },
      [o] { return o->report; }, &o->dump);
}

Command probe_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string input, trace, output = "-";
    ProbeTrainingOptions training;
    std::uint64_t seed = 1;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("probe", "Train a linear word-final probe on trace embeddings");
  add_input(sub, "corpus", o->input, "Gold corpus")->required();
  add_input(sub, "--trace", o->trace, "Trace with embeddings")->required();
  sub->add_option("--epochs", o->training.epochs, "Gradient descent epochs")->capture_default_str();
  sub->add_option("--lr", o->training.learning_rate, "Learning rate")->capture_default_str();
  sub->add_option("--seed", o->seed, "Seed for the word-type split")->capture_default_str();
  sub->add_option("-o,--output", o->output, "CSV (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        Corpus c = load_corpus(o->input, o->format);
        auto tracks = load_tracks(c, o->trace);
        std::string out =
            "features,accuracy,word_final_accuracy,word_internal_accuracy,train_examples,test_examples,"
            "train_types,test_types\n";
        auto row = [&](const char* name, const ProbeDataset& data) {
          auto probe = train_probe(data.train, o->training);
          auto acc = probe_accuracy(probe, data.test);
          out += std::string(name) + "," + general17(acc.overall) + "," + general17(acc.word_final) + "," +
                 general17(acc.word_internal) + "," + std::to_string(data.train.size()) + "," +
                 std::to_string(data.test.size()) + "," + std::to_string(data.train_types) + "," +
                 std::to_string(data.test_types) + "\n";
        };
        row("embedding", build_probe_dataset(c, tracks, o->seed));
        row("token_identity", token_identity_dataset(c, o->seed));
        write_output(o->output, out);
      },
      [o] { return o->output; }, &o->dump);
}

Command analyze_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::vector<std::string> inputs, names;
    std::string report = "-", frequencies, correlations;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("analyze", "Corpus statistics and word-final phoneme entropy");
  sub->add_option("corpora", o->inputs, "Gold corpora")->required()->check(CLI::ExistingFile);
  sub->add_option("--names", o->names, "Row names (default: file stems)")->delimiter(',');
  sub->add_option("--report", o->report, "Statistics CSV (- for stdout)")->capture_default_str();
  sub->add_option("--frequencies", o->frequencies, "Per-phoneme positional frequencies CSV");
  sub->add_option("--correlations", o->correlations, "Pearson matrix across corpora (needs 3+)");
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        if (!o->names.empty() && o->names.size() != o->inputs.size())
          throw ArgumentError("--names needs one name per corpus");
        std::vector<CorpusStatistics> stats;
        std::string freqs;
        for (std::size_t i = 0; i < o->inputs.size(); ++i) {
          const std::string name =
              o->names.empty() ? std::filesystem::path(o->inputs[i]).stem().string() : o->names[i];
          Corpus c = load_corpus(o->inputs[i], o->format);
          stats.push_back(corpus_statistics(c, name));
          if (!o->frequencies.empty()) {
            std::istringstream rows(frequencies_csv(c, word_final_distribution(c)));
            std::string line;
            std::getline(rows, line);
            if (i == 0) freqs += "corpus," + line + "\n";
            while (std::getline(rows, line)) freqs += name + "," + line + "\n";
          }
        }
        write_output(o->report, statistics_csv(stats));
        if (!o->frequencies.empty()) write_output(o->frequencies, freqs);
        if (!o->correlations.empty()) write_output(o->correlations, correlation_csv(stats));
      },
      [o] { return o->report; }, &o->dump);
}

Command mcnemar_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string gold, a, b, output = "-";
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("mcnemar", "Paired test of two segmentations' per-position correctness");
  add_input(sub, "--gold", o->gold, "Gold corpus")->required();
  add_input(sub, "--a", o->a, "First segmentation")->required();
  add_input(sub, "--b", o->b, "Second segmentation")->required();
  sub->add_option("-o,--output", o->output, "CSV (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        Corpus gold = load_corpus(o->gold, o->format);
        auto a = load_segmentation(gold, o->a, o->format);
        auto b = load_segmentation(gold, o->b, o->format);
        auto r = mcnemar(gold, a, b);
        write_output(o->output, "b,c,test,exact_limit,p_value\n" + std::to_string(r.b) + "," + std::to_string(r.c) +
                                    "," + (r.exact ? "exact" : "chi2") + "," + std::to_string(kMcNemarExactLimit) +
                                    "," + general17(r.p_value) + "\n");
      },
      [o] { return o->output; }, &o->dump);
}

Command tok_train_command(CLI::App& app) {
  struct Opts {
    Format format;
    CueSource source;
    std::string input, criterion = "ubp", merges, vocab;
    TokenizerOptions options;
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("tok-train", "Learn a subword vocabulary by cue-driven or frequency merges");
  add_input(sub, "corpus", o->input, "Training corpus")->required();
  sub->add_option("--cue,--criterion", o->criterion, "ubp, entropy or frequency")->capture_default_str();
  sub->add_option("--vocab-size", o->options.target_vocab, "Target vocabulary size (includes <UB>)")->required();
  sub->add_option("--min-pair-count", o->options.min_pair_count, "Ignore rarer pairs")->capture_default_str();
  o->source.add(sub, true);
  sub->add_option("--merges", o->merges, "Merges output")->required();
  sub->add_option("--vocab", o->vocab, "Vocabulary output")->required();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        const MergeCriterion criterion = parse_criterion(o->criterion);
        std::optional<TokenizerTrainResult> result;
        if (const auto cue = criterion_cue(criterion)) {
          auto [corpus, tracks] = o->source.load(o->input, o->format, false);
          result = train_cue_merges(corpus.inventory, scored_stream(corpus, tracks, *cue), criterion, o->options);
        } else {
          if (!o->source.model.empty() || !o->source.predictor.empty() || !o->source.trace.empty())
            throw ArgumentError("frequency merges take no cue source");
          Corpus c = load_corpus(o->input, o->format);
          result = train_freq_bpe(c.inventory, strip_boundaries(c), o->options);
        }
        if (result->stopped_early)
          std::cerr << "warning: no admissible pair left at vocabulary size " << result->table.vocabulary().size()
                    << "\n";
        std::ostringstream m, v;
        result->table.write_merges(m);
        result->table.write_vocabulary(v);
        write_output(o->merges, m.str());
        write_output(o->vocab, v.str());
      },
      [o] { return o->merges; }, &o->dump);
}

Command tok_encode_command(CLI::App& app) {
  struct Opts {
    Format format;
    std::string input, merges, vocab, output = "-";
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("tok-encode", "Encode a corpus with learned merges, one utterance per line");
  add_input(sub, "corpus", o->input, "Corpus (word boundaries are ignored)")->required();
  add_input(sub, "--merges", o->merges, "Merges from tok-train")->required();
  add_input(sub, "--vocab", o->vocab, "Vocabulary from tok-train")->required();
  sub->add_option("-o,--output", o->output, "Encoded text (- for stdout)")->capture_default_str();
  add_format(sub, o->format);
  return make(
      sub, o,
      [o] {
        std::ifstream vin(o->vocab, std::ios::binary), min(o->merges, std::ios::binary);
        if (!vin || !min) throw DataError("cannot open tokenizer files");
        const MergeTable table = MergeTable::read(vin, min);
        Corpus c = load_corpus(o->input, o->format);
        std::vector<TokenId> to_table(c.inventory.size(), -1);
        for (std::size_t id = 0; id < c.inventory.size(); ++id) {
          const auto& name = c.inventory.symbol(static_cast<TokenId>(id));
          auto t = table.find(name);
          if (!t) throw DataError("phoneme '" + name + "' is not in the vocabulary");
          to_table[id] = *t;
        }
        const std::string sep = o->format.delimiters().phoneme;
        std::string out;
        for (const auto& utt : c.utterances) {
          std::vector<TokenId> ids;
          ids.reserve(utt.size());
          for (TokenId t : utt.tokens) ids.push_back(to_table[static_cast<std::size_t>(t)]);
          const auto encoded = encode(table, ids);
          for (std::size_t i = 0; i < encoded.size(); ++i)
            out += (i ? sep : "") + table.vocabulary()[static_cast<std::size_t>(encoded[i])];
          out += "\n";
        }
        write_output(o->output, out);
      },
      [o] { return o->output; }, &o->dump);
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  std::vector<Command> commands;
  commands.push_back(ingest_command(app));
  commands.push_back(synth_command(app));
  commands.push_back(train_ngram_command(app));
  commands.push_back(cues_command(app));
  commands.push_back(segment_command(app));
  commands.push_back(tune_command(app));
  commands.push_back(eval_command(app));
  commands.push_back(grid_command(app));
  commands.push_back(probe_command(app));
  commands.push_back(analyze_command(app));
  commands.push_back(mcnemar_command(app));
  commands.push_back(tok_train_command(app));
  commands.push_back(tok_encode_command(app));
  return commands;
}

}  // namespace segcue::cli
