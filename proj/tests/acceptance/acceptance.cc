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

// Runs the ten acceptance checks and prints one PASS/FAIL line per check.
// Exits non-zero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "test_support.h"
#include "xlmatch/evalkit.h"
#include "xlmatch/miner.h"
#include "xlmatch/model/matcher.h"
#include "xlmatch/model/trainer.h"
#include "xlmatch/textprep.h"

namespace xlmatch {
namespace {

using testing::DataDir;
using testing::TestDataDir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures without stopping at the first one.
class Checker {
 public:
  void Expect(bool condition, const std::string &what) {
    if (!condition && failures_++ < 5) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  Outcome Finish(const std::string &summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + notes_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream notes_;
};

std::string Format(const char *pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), pattern, value);
  return buffer;
}

// 1. Audit arithmetic.
Outcome AuditArithmetic() {
  MiningReport report;
  report.recovered_true = 404;
  report.recovered_false = 9;
  report.relative_precision =
      RelativePrecision(report.recovered_true, report.recovered_false);
  Checker c;
  c.Expect(report.relative_precision.has_value(), "precision absent");
  const double p = report.relative_precision.value_or(0);
  c.Expect(std::abs(p - 404.0 / 413.0) < 1e-15, "not 404/413");
  c.Expect(Format("%.4f", p * 100) == "97.8208" || Format("%.2f", p * 100) == "97.82",
           "does not round to 97.82%");
  c.Expect(std::abs(p * 100 - 97.82) < 0.005, "differs from 97.82%");
  return c.Finish("relative precision " + Format("%.6f", p));
}

// 2. Normalization invariances.
Outcome MinerProperties() {
  const StopwordList &sw = testing::DefaultStopwords();
  const NegationSet &neg = NegationSet::Default();
  std::vector<std::string> fillers;
  for (const std::string &w : sw.words) {
    if (!neg.Contains(w)) fillers.push_back(w);
  }
  const std::vector<std::string> negations(neg.words().begin(), neg.words().end());
  Rng rng(2026);
  auto insert = [&](std::vector<std::string> words, const std::string &w) {
    words.insert(words.begin() + static_cast<long>(rng.Below(words.size() + 1)), w);
    return words;
  };
  auto key = [&](const std::vector<std::string> &w) {
    return NormalizeKey(testing::Join(w), sw).key;
  };
  Checker c;
  for (int i = 0; i < 1000; ++i) {
    const std::vector<std::string> words = testing::RandomWords(rng, 1, 8);
    const std::string base = key(words);
    const std::string sentence = testing::Join(words);
    std::vector<std::string> shuffled = words;
    rng.Shuffle(shuffled);
    c.Expect(key(shuffled) == base, "permutation changed '" + sentence + "'");
    c.Expect(key(insert(words, fillers[rng.Below(fillers.size())])) == base,
             "stopword changed '" + sentence + "'");
    c.Expect(key(insert(words, std::to_string(rng.Below(1000000)))) == base,
             "digits changed '" + sentence + "'");
    const auto once = insert(words, negations[rng.Below(negations.size())]);
    c.Expect(key(once) != base, "negation ignored in '" + sentence + "'");
    const auto twice = insert(once, negations[rng.Below(negations.size())]);
    c.Expect(key(twice) == key(once), "second negation counted in '" + sentence + "'");
  }
  return c.Finish("1000 sentences, 5 invariances each");
}

// 3. Mining against the all-pairs oracle.
Outcome MinerOracle() {
  const StopwordList &sw = testing::DefaultStopwords();
  Checker c;
  size_t stage1 = 0;
  size_t stage2 = 0;
  for (uint64_t seed : {11, 12, 13}) {
    const auto fixture = testing::MakeMiningFixture(seed, 200, 60);
    const auto s1 = MineStage1(fixture.unlabeled, sw);
    const auto s2 = MineStage2(fixture.labeled, fixture.unlabeled, sw);
    const auto o1 = testing::OracleStage1(fixture.unlabeled, sw);
    const auto o2 = testing::OracleStage2(fixture.labeled, fixture.unlabeled, sw);
    c.Expect(!o1.empty() && !o2.empty(), "fixture has no collisions");
    c.Expect(testing::AsLabeledKeys(s1) == o1 && s1.size() == o1.size(),
             "stage 1 differs for seed " + std::to_string(seed));
    c.Expect(testing::AsLabeledKeys(s2) == o2 && s2.size() == o2.size(),
             "stage 2 differs for seed " + std::to_string(seed));
    stage1 += s1.size();
    stage2 += s2.size();
  }
  return c.Finish(std::to_string(stage1) + " stage-1 and " + std::to_string(stage2) +
                  " stage-2 pairs over 3 fixtures of 200 records");
}

// 4. OOV repair.
Outcome OovRepair() {
  Vocabulary vocab;
  for (const char *w : {"cancelé", "cupón", "trabajáis", "recibiré", "reembolso",
                        "pedido", "quiero"}) {
    vocab.Add(w);
  }
  const RepairTable table(vocab, LoadExplicitFixes(DataDir() + "/fixes_es.txt"));
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"cancele", "cancelé"},     {"cupon", "cupón"},
      {"trabajais", "trabajáis"}, {"recibire", "recibiré"},
      {"reemboloso", "reembolso"}};
  Checker c;
  for (const auto &[from, to] : cases) {
    const std::string got = RepairToken(from, table);
    c.Expect(got == to, from + " -> " + got);
  }
  c.Expect(RepairTokenDetailed("reemboloso", table).rule == RepairRule::kExplicit,
           "reemboloso not repaired by the explicit fix");
  return c.Finish("5 of 5 pairs resolved");
}

// 5. Shapes.
Outcome Shapes() {
  Checker c;
  int built = 0;
  for (int mask = 1; mask < 8; ++mask) {
    for (int hidden : {32, 64, 128}) {
      ModelConfig config;
      config.use_conv = mask & 1;
      config.use_lstm = mask & 2;
      config.use_bilstm = mask & 4;
      config.hidden_size = hidden;
      config.embed_dim = 8;
      config.max_len = 12;
      const int expected =
          (config.use_conv ? static_cast<int>(config.kernel_sizes.size()) *
                                 config.conv_filters
                           : 0) +
          (config.use_lstm ? hidden : 0) + (config.use_bilstm ? 2 * hidden : 0);
      const auto e = testing::MakeToyEmbeddings(10, 8, mask);
      const Matcher m(config, e.vocab, e.vectors);
      Rng rng(hidden + mask);
      const Eigen::VectorXd rep = m.Represent(testing::RandomSequence(rng, m));
      const std::string tag =
          "mask " + std::to_string(mask) + " hidden " + std::to_string(hidden);
      c.Expect(m.representation_dim() == expected && rep.size() == expected,
               tag + ": rep_dim");
      c.Expect(m.head_input_dim() == 2 * expected, tag + ": head input");
      ++built;
    }
  }
  ModelConfig defaults;
  c.Expect(defaults.RepresentationDim() == 384 && defaults.HeadInputDim() == 768,
           "default widths");
  return c.Finish(std::to_string(built) + " models built");
}

// 6. Symmetry.
Outcome Symmetry() {
  ModelConfig config;
  config.embed_dim = 16;
  config.max_len = 12;
  const auto e = testing::MakeToyEmbeddings(40, 16, 6);
  const Matcher m(config, e.vocab, e.vectors);
  Rng rng(6);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const EncodedSequence a = testing::RandomSequence(rng, m);
    const EncodedSequence b = testing::RandomSequence(rng, m);
    worst = std::max(worst, std::abs(m.MatchProbability(a, b) - m.MatchProbability(b, a)));
  }
  Checker c;
  c.Expect(worst < 1e-6, "max gap " + Format("%.3g", worst));
  return c.Finish("max |p(a,b) - p(b,a)| = " + Format("%.3g", worst));
}

// 7. Gradient check.
Outcome GradientCheck() {
  Checker c;
  double worst = 0;
  int64_t checked = 0;
  for (int mask = 1; mask < 8; ++mask) {
    ModelConfig config = testing::MiniConfig();
    config.use_conv = mask & 1;
    config.use_lstm = mask & 2;
    config.use_bilstm = mask & 4;
    const auto e = testing::MakeToyEmbeddings(6, config.embed_dim, 70 + mask);
    Matcher m(config, e.vocab, e.vectors);
    testing::PrepareForGradientCheck(m, 80 + mask);
    Rng rng(90 + mask);
    std::vector<EncodedPair> batch;
    std::vector<int> labels;
    for (int i = 0; i < 4; ++i) {
      batch.push_back({testing::RandomSequence(rng, m), testing::RandomSequence(rng, m)});
      labels.push_back(i % 2);
    }
    for (Phase phase : {Phase::kInfer, Phase::kTrain}) {
      const auto result = testing::CheckGradients(m, batch, labels, phase);
      worst = std::max(worst, result.max_relative_error);
      checked += result.checked;
      c.Expect(result.max_relative_error < 1e-3,
               "mask " + std::to_string(mask) + " " + result.worst_parameter + " " +
                   Format("%.3g", result.max_relative_error));
    }
  }
  return c.Finish(std::to_string(checked) + " entries, max relative error " +
                  Format("%.3g", worst));
}

// 8. Overfit.
Outcome Overfit() {
  Checker c;
  std::string losses;
  for (uint64_t seed : {1, 2, 3}) {
    const testing::ToyTask task = testing::MakeSeparableTask(seed);
    double final_loss[2];
    std::vector<double> history[2];
    for (int run = 0; run < 2; ++run) {
      Matcher m(task.config, task.embeddings.vocab, task.embeddings.vectors);
      history[run] = Train(m, task.data, nullptr, task.config.training()).train_loss;
      final_loss[run] = m.Loss(task.data.pairs, task.data.labels, Phase::kInfer, nullptr);
    }
    c.Expect(history[0].size() <= 200, "more than 200 epochs");
    c.Expect(final_loss[0] < 0.05, "seed " + std::to_string(seed) + " loss " +
                                       Format("%.4f", final_loss[0]));
    c.Expect(final_loss[0] == final_loss[1] && history[0] == history[1],
             "seed " + std::to_string(seed) + " not deterministic");
    losses += (losses.empty() ? "" : ", ") + Format("%.4f", final_loss[0]);
  }
  return c.Finish("final log loss " + losses + " after 200 epochs");
}

// 9. Metric oracles.
Outcome MetricOracles() {
  Checker c;
  const double two_point =
      LogLoss(std::vector<int>{1, 0}, std::vector<double>{0.8, 0.2});
  const double coin = LogLoss(std::vector<int>{1}, std::vector<double>{0.5});
  c.Expect(std::abs(two_point - 0.22314) < 1e-5, "two-point " + Format("%.6f", two_point));
  c.Expect(std::abs(coin - std::log(2.0)) < 1e-5, "coin flip " + Format("%.6f", coin));

  struct Case {
    std::vector<int> y;
    std::vector<double> p;
    int64_t tp, fp, fn, tn;
  };
  const std::vector<Case> cases = {
      {{1, 1, 0, 0}, {0.9, 0.4, 0.6, 0.1}, 1, 1, 1, 1},
      {{1, 1, 1, 0}, {0.7, 0.8, 0.5, 0.2}, 3, 0, 0, 1},
      {{0, 0, 1}, {0.1, 0.2, 0.3}, 0, 0, 1, 2},
      {{1, 0, 0, 1, 0}, {0.2, 0.9, 0.51, 0.49, 0.5}, 0, 3, 2, 0},
  };
  for (size_t i = 0; i < cases.size(); ++i) {
    const Case &k = cases[i];
    const MetricsReport r = ClassificationMetrics(k.y, k.p);
    const std::string tag = "case " + std::to_string(i + 1);
    c.Expect(r.true_positives == k.tp && r.false_positives == k.fp &&
                 r.false_negatives == k.fn && r.true_negatives == k.tn,
             tag + " confusion matrix");
    const bool has_p = k.tp + k.fp > 0;
    const bool has_r = k.tp + k.fn > 0;
    c.Expect(r.precision.has_value() == has_p && r.recall.has_value() == has_r,
             tag + " absent values");
    if (has_p) {
      c.Expect(*r.precision == static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fp),
               tag + " precision");
    }
    if (has_r) {
      c.Expect(*r.recall == static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fn),
               tag + " recall");
    }
  }
  return c.Finish("log loss " + Format("%.5f", two_point) + " and " + Format("%.5f", coin) +
                  ", " + std::to_string(cases.size()) + " confusion matrices");
}

// 10. End to end through the command-line tool.
std::string Quote(const std::string &s) { return "'" + s + "'"; }

std::string ReadBytes(const std::string &path) {
  return std::filesystem::exists(path) ? testing::ReadFile(path) : std::string();
}

Outcome EndToEnd(const std::string &cli) {
  const std::string e2e = TestDataDir() + "/e2e/";
  const std::string data = DataDir() + "/";
  const std::string text =
      " --stopwords " + Quote(data + "stopwords/english.txt") +
      " --stopword-additions " + Quote(data + "stopwords/additions.txt") +
      " --stopword-removals " + Quote(data + "stopwords/removals.txt") +
      " --negations " + Quote(data + "negations.txt");
  const std::vector<std::string> outputs = {"stats.json",  "minted.tsv", "report.json",
                                            "model.bin",   "preds.tsv",  "metrics.json"};
  testing::TempDir dir;
  Checker c;
  std::vector<std::string> first;
  for (int run = 1; run <= 2; ++run) {
    const std::string out = dir.File("run" + std::to_string(run)) + "/";
    std::filesystem::create_directories(out);
    const std::vector<std::pair<std::string, std::string>> steps = {
        {"stats", "stats --corpus " + Quote(e2e + "spanish_train.tsv") +
                      " --format spanish-train --embeddings " + Quote(e2e + "vectors.vec") +
                      " --out " + Quote(out + "stats.json")},
        {"mine", "mine --english-train " + Quote(e2e + "english_train.tsv") +
                     " --spanish-train " + Quote(e2e + "spanish_train.tsv") +
                     " --unlabeled " + Quote(e2e + "unlabeled.tsv") +
                     " --exclude-spanish-train --out " + Quote(out + "minted.tsv") +
                     " --report " + Quote(out + "report.json") + text},
        {"train", "train --config " + Quote(e2e + "train.cfg") + " --pairs " +
                      Quote(out + "minted.tsv") + " --val " +
                      Quote(e2e + "spanish_train.tsv") +
                      " --val-format spanish-train --embeddings " +
                      Quote(e2e + "vectors.vec") + " --fixes " + Quote(e2e + "fixes.txt") +
                      " --seed 11 --out " + Quote(out + "model.bin")},
        {"predict", "predict --model " + Quote(out + "model.bin") + " --pairs " +
                        Quote(e2e + "spanish_train.tsv") +
                        " --pairs-format spanish-train --out " + Quote(out + "preds.tsv")},
        {"evaluate", "evaluate --labels " + Quote(e2e + "spanish_train.tsv") +
                         " --labels-format spanish-train --preds " +
                         Quote(out + "preds.tsv") + " --out " + Quote(out + "metrics.json")},
    };
    for (const auto &[name, args] : steps) {
      const std::string command =
          Quote(cli) + " " + args + " 2>> " + Quote(out + "log.txt");
      const int status = std::system(command.c_str());
      c.Expect(status == 0, "run " + std::to_string(run) + " " + name + " exited " +
                                std::to_string(status));
    }
    for (const std::string &name : outputs) {
      const std::string bytes = ReadBytes(out + name);
      c.Expect(!bytes.empty(), "run " + std::to_string(run) + " produced no " + name);
      if (run == 1) {
        first.push_back(bytes);
      } else {
        c.Expect(bytes == first[&name - outputs.data()], name + " differs between runs");
      }
    }
  }
  std::string summary = "6 outputs byte-identical across 2 runs";
  try {
    const auto metrics = ReadBytes(dir.File("run1/metrics.json"));
    const auto pos = metrics.find("\"log_loss\": ");
    if (pos != std::string::npos) {
      summary += ", validation log loss " + metrics.substr(pos + 12, 6);
    }
  } catch (const std::exception &) {
  }
  return c.Finish(summary);
}

}  // namespace
}  // namespace xlmatch

int main(int argc, char **argv) {
  CLI::App app("acceptance checks");
  std::string cli;
  app.add_option("--cli", cli, "path to the xlmatch executable")->required();
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::off);

  struct Criterion {
    const char *name;
    double budget_seconds;
    std::function<xlmatch::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"audit arithmetic", 1, xlmatch::AuditArithmetic},
      {"miner properties", 5, xlmatch::MinerProperties},
      {"miner oracle equivalence", 5, xlmatch::MinerOracle},
      {"OOV repair", 1, xlmatch::OovRepair},
      {"model shapes", 10, xlmatch::Shapes},
      {"symmetry", 30, xlmatch::Symmetry},
      {"gradient check", 60, xlmatch::GradientCheck},
      {"overfit", 120, xlmatch::Overfit},
      {"metric oracles", 1, xlmatch::MetricOracles},
      {"end-to-end smoke", 180, [&cli] { return xlmatch::EndToEnd(cli); }},
  };

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Criterion &criterion = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    xlmatch::Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception &e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " (over the " + std::to_string(static_cast<int>(criterion.budget_seconds)) +
                        " s budget)";
    }
    if (!outcome.pass) ++failed;
    std::printf("[%s] %2zu %-26s %7.2f s  %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criterion.name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
