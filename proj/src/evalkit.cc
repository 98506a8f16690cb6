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

#include "xlmatch/evalkit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "json.hpp"
#include "xlmatch/corpus.h"
#include "xlmatch/errors.h"

namespace xlmatch {
namespace {

void CheckInputs(std::span<const int> labels, std::span<const double> probs) {
  if (labels.size() != probs.size()) {
    throw ArgumentError("got " + std::to_string(labels.size()) +
                        " labels but " + std::to_string(probs.size()) +
                        " probabilities");
  }
  if (labels.empty()) throw ArgumentError("no pairs to evaluate");
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("labels must be 0 or 1");
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ArgumentError("probability outside [0, 1]: " + std::to_string(p));
    }
  }
}

std::optional<double> Ratio(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string FormatOptional(const std::optional<double> &value) {
  return value ? fmt::format("{:.2f}", *value) : std::string("-");
}

}  // namespace

double LogLoss(std::span<const int> labels, std::span<const double> probs) {
  CheckInputs(labels, probs);
  double total = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(probs[i], kProbabilityClip, 1.0 - kProbabilityClip);
    total += labels[i] ? std::log(p) : std::log1p(-p);
  }
  return -total / static_cast<double>(labels.size());
}

MetricsReport ClassificationMetrics(std::span<const int> labels,
                                    std::span<const double> probs,
                                    double threshold) {
  MetricsReport report;
  report.log_loss = LogLoss(labels, probs);
  report.n = static_cast<int64_t>(labels.size());
  report.threshold = threshold;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = probs[i] >= threshold;
    if (predicted && labels[i]) ++report.true_positives;
    if (predicted && !labels[i]) ++report.false_positives;
    if (!predicted && labels[i]) ++report.false_negatives;
    if (!predicted && !labels[i]) ++report.true_negatives;
  }
  report.precision = Ratio(report.true_positives,
                           report.true_positives + report.false_positives);
  report.recall = Ratio(report.true_positives,
                        report.true_positives + report.false_negatives);
  if (report.precision && report.recall &&
      *report.precision + *report.recall > 0) {
    report.f1 = 2 * *report.precision * *report.recall /
                (*report.precision + *report.recall);
  }
  return report;
}

std::string FormatMetricsRow(std::string_view name, const MetricsReport &report) {
  return fmt::format("{}  {:.4f}  {}  {}  {}", name, report.log_loss,
                     FormatOptional(report.precision),
                     FormatOptional(report.recall), FormatOptional(report.f1));
}

void WriteMetricsReport(const MetricsReport &report, const std::string &path) {
  using Json = nlohmann::ordered_json;
  auto optional = [](const std::optional<double> &v) {
    return v ? Json(*v) : Json(nullptr);
  };
  const Json j{{"n", report.n},
               {"log_loss", report.log_loss},
               {"precision", optional(report.precision)},
               {"recall", optional(report.recall)},
               {"f1", optional(report.f1)},
               {"threshold", report.threshold},
               {"true_positives", report.true_positives},
               {"false_positives", report.false_positives},
               {"false_negatives", report.false_negatives},
               {"true_negatives", report.true_negatives}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

void WritePredictions(std::span<const PredictionRecord> records,
                      const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const PredictionRecord &r : records) {
    out << SanitizeField(r.pair_id) << '\t' << fmt::format("{:.6f}", r.probability)
        << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<PredictionRecord> ReadPredictions(const std::string &path) {
  std::vector<PredictionRecord> out;
  std::set<std::string, std::less<>> seen;
  const std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    const std::vector<std::string> fields = SplitTabs(lines[i]);
    if (fields.size() != 2) {
      throw FormatError(path, line_no, "expected pair_id and probability");
    }
    double p = 0;
    const std::string &text = fields[1];
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (ec != std::errc() || end != text.data() + text.size() ||
        !(p >= 0.0 && p <= 1.0)) {
      throw FormatError(path, line_no, "bad probability '" + text + "'");
    }
    if (!seen.insert(fields[0]).second) {
      throw FormatError(path, line_no, "duplicate pair id " + fields[0]);
    }
    out.push_back({fields[0], p});
  }
  return out;
}

std::vector<PredictionRecord> EnsembleAverage(
    std::span<const std::vector<PredictionRecord>> predictions,
    std::span<const double> weights) {
  if (predictions.empty()) throw ArgumentError("no prediction sets to average");
  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(predictions.size(), 1.0);
  if (w.size() != predictions.size()) {
    throw ArgumentError(std::to_string(w.size()) + " weights for " +
                        std::to_string(predictions.size()) + " prediction sets");
  }
  double weight_sum = 0;
  for (double x : w) {
    if (!(x >= 0) || !std::isfinite(x)) {
      throw ArgumentError("weights must be finite and nonnegative");
    }
    weight_sum += x;
  }
  if (!(weight_sum > 0)) throw ArgumentError("weights must not all be zero");

  const std::vector<PredictionRecord> &first = predictions.front();
  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < first.size(); ++i) position.emplace(first[i].pair_id, i);

  std::vector<double> sums(first.size(), 0.0);
  for (size_t k = 0; k < predictions.size(); ++k) {
    std::set<std::string> missing;
    for (const auto &[id, i] : position) missing.insert(id);
    std::set<std::string> extra;
    for (const PredictionRecord &r : predictions[k]) {
      const auto it = position.find(r.pair_id);
      if (it == position.end()) {
        extra.insert(r.pair_id);
        continue;
      }
      missing.erase(r.pair_id);
      sums[it->second] += w[k] * r.probability;
    }
    if (!missing.empty() || !extra.empty() ||
        predictions[k].size() != first.size()) {
      std::string message = "prediction set " + std::to_string(k + 1) +
                            " does not cover the same pair ids as set 1;"
                            " symmetric difference:";
      for (const std::string &id : missing) message += " " + id;
      for (const std::string &id : extra) message += " " + id;
      throw AlignmentError(message);
    }
  }
  std::vector<PredictionRecord> out;
  out.reserve(first.size());
  for (size_t i = 0; i < first.size(); ++i) {
    out.push_back({first[i].pair_id, std::clamp(sums[i] / weight_sum, 0.0, 1.0)});
  }
  return out;
}

std::vector<PredictionRecord> EnsembleAverage(std::span<const std::string> paths,
                                              std::span<const double> weights) {
  std::vector<std::vector<PredictionRecord>> sets;
  sets.reserve(paths.size());
  for (const std::string &path : paths) sets.push_back(ReadPredictions(path));
  return EnsembleAverage(std::span<const std::vector<PredictionRecord>>(sets),
                         weights);
}

}  // namespace xlmatch
