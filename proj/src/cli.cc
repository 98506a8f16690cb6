// Copyright 2026 The xlmatch Authors.
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

#include "xlmatch/cli.h"

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string_view>
#include <unordered_set>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "xlmatch/baseline.h"
#include "xlmatch/corpus.h"
#include "xlmatch/embeddings.h"
#include "xlmatch/errors.h"
#include "xlmatch/evalkit.h"
#include "xlmatch/miner.h"
#include "xlmatch/model/config.h"
#include "xlmatch/model/matcher.h"
#include "xlmatch/model/serialization.h"
#include "xlmatch/model/trainer.h"
#include "xlmatch/textprep.h"

namespace xlmatch {
namespace {

constexpr char kUsage[] =
    "usage: xlmatch <command> [options]\n"
    "\n"
    "commands:\n"
    "  stats      token length and OOV statistics of a corpus\n"
    "  mine       build the Spanish training pairs\n"
    "  audit      relative precision of the normalization hash\n"
    "  train      train a siamese matcher\n"
    "  predict    score pairs with a trained matcher\n"
    "  baseline   character n-gram baseline predictions\n"
    "  ensemble   average prediction files\n"
    "  evaluate   log loss and precision/recall/F1\n"
    "\n"
    "Every command accepts --config FILE with key=value lines; flags win.\n"
    "Run 'xlmatch <command> --help' for its options.\n";

void SetUpLogging() {
  auto logger = spdlog::get("xlmatch");
  if (!logger) logger = spdlog::stderr_logger_mt("xlmatch");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
}

std::vector<std::string> FormatNames() {
  return {"minted", "english-train", "spanish-train", "test"};
}

CLI::Option *AddFormat(CLI::App &app, const std::string &name,
                       std::string &value, const std::string &help) {
  return app.add_option(name, value, help)
      ->check(CLI::IsMember(FormatNames()))
      ->capture_default_str();
}

class Command {
 public:
  virtual ~Command() = default;
  virtual void Register(CLI::App &app) = 0;
  virtual void Run() = 0;
};

// Stopword, negation and header options shared by the mining stages.
struct TextOptions {
  std::string stopwords;
  std::string additions;
  std::string removals;
  std::string negations;
  bool skip_header = false;

  void Register(CLI::App &app) {
    app.add_option("--stopwords", stopwords, "base English stopword list")
        ->required();
    app.add_option("--stopword-additions", additions,
                   "words added to the base list (default: built-in)");
    app.add_option("--stopword-removals", removals,
                   "words removed from the base list (default: built-in)");
    app.add_option("--negations", negations,
                   "negation words (default: built-in)");
    app.add_flag("--skip-header", skip_header,
                 "input files start with a header line");
  }

  StopwordList Stopwords() const {
    StopwordDelta delta = DefaultStopwordDelta();
    if (!additions.empty()) delta.additions = LoadWordList(additions);
    if (!removals.empty()) delta.removals = LoadWordList(removals);
    return ConsolidateStopwords(LoadStopwordList(stopwords), delta);
  }

  NegationSet Negations() const {
    return negations.empty() ? NegationSet::Default()
                             : NegationSet(LoadWordList(negations));
  }

  ParseOptions Parse() const { return {skip_header}; }
};

class StatsCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--corpus", corpus_, "corpus file")->required();
    app.add_option("--embeddings", embeddings_, "fastText .vec file")
        ->required();
    app.add_option("--out", out_, "statistics JSON")->required();
    std::vector<std::string> formats = FormatNames();
    formats.push_back("unlabeled");
    app.add_option("--format", format_, "corpus layout")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    app.add_flag("--skip-header", skip_header_,
                 "the corpus starts with a header line");
  }

  void Run() override {
    const ParseOptions parse{skip_header_};
    std::vector<std::string> sentences;
    std::optional<Corpus> corpus;
    std::vector<SentencePair> pairs;
    if (format_ == "unlabeled") {
      corpus = ParseUnlabeledFile(corpus_, parse);
    } else if (format_ == "english-train" || format_ == "spanish-train") {
      corpus = ParsePairFile(corpus_,
                             format_ == "english-train" ? Language::kEnglish
                                                        : Language::kSpanish,
                             parse);
    } else {
      pairs = LoadSentencePairs(corpus_, ParsePairFormat(format_), parse);
    }
    if (corpus) {
      sentences = SpanishSentences(*corpus);
    } else {
      for (const SentencePair &p : pairs) {
        sentences.push_back(p.first);
        sentences.push_back(p.second);
      }
    }
    // Statistics describe unrepaired text, so only the raw tokens matter.
    std::unordered_set<std::string> keep;
    for (const std::string &s : sentences) {
      for (std::string &token : Tokenize(s).tokens) keep.insert(std::move(token));
    }
    const EmbeddingTable table = LoadEmbeddingTable(embeddings_, &keep);
    const OovStats stats = corpus ? ComputeOovStats(*corpus, table.vocab)
                                  : ComputeOovStats(pairs, table.vocab);
    WriteOovStats(stats, FileStem(corpus_), out_);
    spdlog::info("{}: {} sentences, {} OOV terms, {} OOV sentences",
                 FileStem(corpus_), stats.sentences, stats.oov_terms,
                 stats.oov_sentences);
  }

 private:
  std::string corpus_, embeddings_, out_, format_ = "spanish-train";
  bool skip_header_ = false;
};

class MineCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--english-train", english_, "labeled English pairs")
        ->required();
    app.add_option("--spanish-train", spanish_, "labeled Spanish pairs")
        ->required();
    app.add_option("--unlabeled", unlabeled_,
                   "unlabeled Spanish questions with English translations")
        ->required();
    app.add_option("--out", out_, "minted pairs TSV")->required();
    app.add_option("--report", report_, "mining report JSON");
    app.add_flag("--exclude-spanish-train", exclude_spanish_,
                 "leave the native Spanish pairs out of the output");
    text_.Register(app);
  }

  void Run() override {
    const ParseOptions parse = text_.Parse();
    const Corpus english = ParsePairFile(english_, Language::kEnglish, parse);
    const Corpus spanish = ParsePairFile(spanish_, Language::kSpanish, parse);
    const Corpus unlabeled = ParseUnlabeledFile(unlabeled_, parse);
    const StopwordList stopwords = text_.Stopwords();
    BuildOptions options;
    options.include_spanish_train = !exclude_spanish_;
    options.negations = text_.Negations();

    TrainingSet set =
        BuildTrainingSet(english, spanish, unlabeled, stopwords, options);
    const MiningReport audit =
        AuditRelativePrecision(english, stopwords, options.negations);
    set.report.recovered_true = audit.recovered_true;
    set.report.recovered_false = audit.recovered_false;
    set.report.relative_precision = audit.relative_precision;

    WriteMintedPairs(set.pairs, out_);
    if (!report_.empty()) WriteMiningReport(set.report, report_);
    spdlog::info("minted {} pairs ({} positive, {} negative), {} conflicts dropped",
                 set.report.total_minted, set.report.minted_positive,
                 set.report.minted_negative, set.report.conflicts_dropped);
  }

 private:
  std::string english_, spanish_, unlabeled_, out_, report_;
  bool exclude_spanish_ = false;
  TextOptions text_;
};

class AuditCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--english-train", english_, "labeled English pairs")
        ->required();
    app.add_option("--report", report_, "audit report JSON")->required();
    text_.Register(app);
  }

  void Run() override {
    const Corpus english =
        ParsePairFile(english_, Language::kEnglish, text_.Parse());
    const MiningReport report =
        AuditRelativePrecision(english, text_.Stopwords(), text_.Negations());
    WriteMiningReport(report, report_);
    if (report.relative_precision) {
      spdlog::info("recovered {} true and {} false pairs, relative precision {:.4f}",
                   report.recovered_true, report.recovered_false,
                   *report.relative_precision);
    } else {
      spdlog::info("no pair recovered");
    }
  }

 private:
  std::string english_, report_;
  TextOptions text_;
};

class TrainCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--pairs", pairs_, "training pairs")->required();
    app.add_option("--val", val_, "validation pairs");
    AddFormat(app, "--pairs-format", format_, "layout of --pairs");
    AddFormat(app, "--val-format", val_format_,
              "layout of --val; defaults to --pairs-format");
    app.add_option("--embeddings", embeddings_, "fastText .vec file")
        ->required();
    app.add_option("--fixes", fixes_, "explicit spelling fixes");
    app.add_option("--out", out_, "model file")->required();
    app.add_flag("--full-vocabulary", full_vocabulary_,
                 "keep every vector instead of those the data can reach");
    app.add_option("--preset", preset_,
                   "siamese_lstm, siamese_conv, siamese_conv_lstm or "
                   "siamese_conv_lstm_bilstm");

    // Each model field has a dashed flag and an underscore alias so config
    // files may use either spelling.
    Bind(app, "use-conv", &ModelConfig::use_conv);
    Bind(app, "use-lstm", &ModelConfig::use_lstm);
    Bind(app, "use-bilstm", &ModelConfig::use_bilstm);
    Bind(app, "kernel-sizes", &ModelConfig::kernel_sizes);
    Bind(app, "conv-filters", &ModelConfig::conv_filters);
    Bind(app, "hidden-size", &ModelConfig::hidden_size);
    Bind(app, "mlp-hidden", &ModelConfig::mlp_hidden);
    Bind(app, "dropout-rate", &ModelConfig::dropout_rate);
    Bind(app, "absolute-difference", &ModelConfig::absolute_difference);
    Bind(app, "max-len", &ModelConfig::max_len);
    Bind(app, "embed-dim", &ModelConfig::embed_dim);
    Bind(app, "train-embeddings", &ModelConfig::train_embeddings);
    Bind(app, "learning-rate", &ModelConfig::learning_rate);
    Bind(app, "batch-size", &ModelConfig::batch_size);
    Bind(app, "epochs", &ModelConfig::epochs);
    Bind(app, "patience", &ModelConfig::patience);
    Bind(app, "seed", &ModelConfig::seed);
  }

  void Run() override {
    ModelConfig config = preset_.empty() ? ModelConfig{} : PresetConfig(preset_);
    for (const auto &apply : overrides_) apply(config);

    const PairFormat format = ParsePairFormat(format_);
    const std::vector<SentencePair> train = LoadSentencePairs(pairs_, format);
    std::vector<SentencePair> val;
    if (!val_.empty()) {
      val = LoadSentencePairs(
          val_, val_format_.empty() ? format : ParsePairFormat(val_format_));
    }
    const std::map<std::string, std::string> fixes =
        fixes_.empty() ? std::map<std::string, std::string>{}
                       : LoadExplicitFixes(fixes_);

    std::optional<std::unordered_set<std::string>> keep;
    if (!full_vocabulary_) {
      std::vector<std::string> sentences;
      for (const auto &set : {std::cref(train), std::cref(val)}) {
        for (const SentencePair &p : set.get()) {
          sentences.push_back(p.first);
          sentences.push_back(p.second);
        }
      }
      keep = ReachableTokens(sentences, fixes);
    }
    const EmbeddingTable table =
        LoadEmbeddingTable(embeddings_, keep ? &*keep : nullptr);
    if (!embed_dim_given_) config.embed_dim = table.dim;
    spdlog::info("{} vectors of dimension {}", table.vocab.size(), table.dim);

    Matcher matcher = Matcher::Build(config, table, fixes);
    const TrainingLog log = Train(matcher, train, val, config.training());
    SaveMatcher(matcher, out_);
    spdlog::info("saved {} (best epoch {} of {})", out_, log.best_epoch,
                 log.train_loss.size());
  }

 private:
  template <typename T>
  void Bind(CLI::App &app, const std::string &name, T ModelConfig::*field) {
    std::string underscored = name;
    std::replace(underscored.begin(), underscored.end(), '-', '_');
    auto value = std::make_shared<T>(ModelConfig{}.*field);
    CLI::Option *opt =
        app.add_option("--" + name + ",--" + underscored, *value);
    overrides_.push_back([this, opt, value, field, name](ModelConfig &c) {
      if (opt->count() == 0) return;
      if (name == "embed-dim") embed_dim_given_ = true;
      c.*field = *value;
    });
  }

  std::string pairs_, val_, format_ = "minted", val_format_, embeddings_,
      fixes_, out_, preset_;
  bool full_vocabulary_ = false;
  bool embed_dim_given_ = false;
  std::vector<std::function<void(ModelConfig &)>> overrides_;
};

class PredictCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--model", model_, "model file")->required();
    app.add_option("--pairs", pairs_, "pairs to score")->required();
    AddFormat(app, "--pairs-format", format_, "layout of --pairs");
    app.add_option("--out", out_, "predictions TSV")->required();
    app.add_option("--seed", seed_,
                   "accepted for symmetry with train; prediction is "
                   "deterministic");
  }

  void Run() override {
    const Matcher matcher = LoadMatcher(model_);
    const std::vector<SentencePair> pairs =
        LoadSentencePairs(pairs_, ParsePairFormat(format_));
    WritePredictions(PredictBatch(matcher, pairs), out_);
    spdlog::info("wrote {} predictions to {}", pairs.size(), out_);
  }

 private:
  std::string model_, pairs_, format_ = "test", out_;
  uint64_t seed_ = 0;
};

class BaselineCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--pairs", pairs_, "pairs to score")->required();
    AddFormat(app, "--pairs-format", pairs_format_, "layout of --pairs");
    app.add_option("--train", train_, "labeled pairs for calibration")
        ->required();
    AddFormat(app, "--train-format", train_format_, "layout of --train");
    app.add_option("--n", n_, "character n-gram order")
        ->capture_default_str();
    app.add_flag("--no-padding", no_padding_,
                 "do not add boundary markers around sentences");
    app.add_option("--out", out_, "predictions TSV")->required();
  }

  void Run() override {
    const std::vector<SentencePair> train =
        LoadSentencePairs(train_, ParsePairFormat(train_format_));
    const std::vector<SentencePair> pairs =
        LoadSentencePairs(pairs_, ParsePairFormat(pairs_format_));
    const Calibration calibration = CalibrateBaseline(train, n_, !no_padding_);
    spdlog::info("calibration slope {:.4f}, intercept {:.4f}",
                 calibration.slope, calibration.intercept);
    WritePredictions(PredictBaseline(pairs, calibration, n_, !no_padding_), out_);
  }

 private:
  std::string pairs_, pairs_format_ = "test", train_, train_format_ = "minted",
                                      out_;
  int n_ = 3;
  bool no_padding_ = false;
};

class EnsembleCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--preds", preds_, "prediction files")->required();
    app.add_option("--weights", weights_, "one weight per file");
    app.add_option("--out", out_, "averaged predictions TSV")->required();
  }

  void Run() override {
    WritePredictions(EnsembleAverage(preds_, weights_), out_);
  }

 private:
  std::vector<std::string> preds_;
  std::vector<double> weights_;
  std::string out_;
};

class EvaluateCommand : public Command {
 public:
  void Register(CLI::App &app) override {
    app.add_option("--labels", labels_, "labeled pairs")->required();
    AddFormat(app, "--labels-format", format_, "layout of --labels");
    app.add_option("--preds", preds_, "predictions TSV")->required();
    app.add_option("--threshold", threshold_, "decision threshold")
        ->capture_default_str();
    app.add_option("--name", name_, "row name in the logged summary");
    app.add_option("--out", out_, "metrics JSON")->required();
  }

  void Run() override {
    const std::vector<SentencePair> gold =
        LoadSentencePairs(labels_, ParsePairFormat(format_));
    const std::vector<PredictionRecord> preds = ReadPredictions(preds_);
    if (gold.size() != preds.size()) {
      throw ArgumentError(labels_ + " has " + std::to_string(gold.size()) +
                          " pairs but " + preds_ + " has " +
                          std::to_string(preds.size()) + " predictions");
    }
    std::vector<int> labels;
    std::vector<double> probs;
    for (size_t i = 0; i < gold.size(); ++i) {
      if (!gold[i].label) {
        throw ArgumentError("pair " + gold[i].id + " has no label");
      }
      if (gold[i].id != preds[i].pair_id) {
        throw AlignmentError("row " + std::to_string(i + 1) + ": label id " +
                             gold[i].id + " but prediction id " +
                             preds[i].pair_id);
      }
      labels.push_back(*gold[i].label);
      probs.push_back(preds[i].probability);
    }
    const MetricsReport report = ClassificationMetrics(labels, probs, threshold_);
    WriteMetricsReport(report, out_);
    spdlog::info("{}", FormatMetricsRow(name_.empty() ? FileStem(preds_) : name_,
                                        report));
  }

 private:
  std::string labels_, format_ = "minted", preds_, out_, name_;
  double threshold_ = 0.5;
};

std::unique_ptr<Command> MakeCommand(std::string_view name) {
  if (name == "stats") return std::make_unique<StatsCommand>();
  if (name == "mine") return std::make_unique<MineCommand>();
  if (name == "audit") return std::make_unique<AuditCommand>();
  if (name == "train") return std::make_unique<TrainCommand>();
  if (name == "predict") return std::make_unique<PredictCommand>();
  if (name == "baseline") return std::make_unique<BaselineCommand>();
  if (name == "ensemble") return std::make_unique<EnsembleCommand>();
  if (name == "evaluate") return std::make_unique<EvaluateCommand>();
  return nullptr;
}

}  // namespace

int Dispatch(const std::vector<std::string> &args) {
  SetUpLogging();
  if (args.empty()) {
    std::cerr << kUsage;
    return kExitValidation;
  }
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    std::cout << kUsage;
    return kExitOk;
  }
  std::unique_ptr<Command> command = MakeCommand(args[0]);
  if (!command) {
    std::cerr << "xlmatch: unknown command '" << args[0] << "'\n\n" << kUsage;
    return kExitValidation;
  }

  CLI::App app("xlmatch " + args[0], "xlmatch " + args[0]);
  app.set_config("--config", "", "key=value file with option defaults");
  app.allow_config_extras(true);
  command->Register(app);

  // CLI11 consumes the argument vector back to front.
  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    command->Run();
  } catch (const IoError &e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const ValidationError &e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  }
  return kExitOk;
}

int Main(int argc, char **argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return Dispatch(args);
}

}  // namespace xlmatch
