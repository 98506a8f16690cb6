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

#ifndef XLMATCH_EVALKIT_H_
#define XLMATCH_EVALKIT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlmatch/prediction.h"

namespace xlmatch {

inline constexpr double kProbabilityClip = 1e-15;

// Mean negative log-likelihood with probabilities clipped to
// [1e-15, 1 - 1e-15]. Throws ArgumentError on empty or unequal inputs, labels
// other than 0/1, or probabilities outside [0, 1].
double LogLoss(std::span<const int> labels, std::span<const double> probs);

struct MetricsReport {
  int64_t n = 0;
  double log_loss = 0;
  // Absent when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  double threshold = 0.5;
  int64_t true_positives = 0;
  int64_t false_positives = 0;
  int64_t false_negatives = 0;
  int64_t true_negatives = 0;
};

// A pair is predicted positive when prob >= threshold.
MetricsReport ClassificationMetrics(std::span<const int> labels,
                                    std::span<const double> probs,
                                    double threshold = 0.5);

// "name  log_loss  precision  recall  f1" with four decimals for log loss
// and two for the rest; absent values print as "-".
std::string FormatMetricsRow(std::string_view name, const MetricsReport &report);

void WriteMetricsReport(const MetricsReport &report, const std::string &path);

// pair_id TAB probability, six decimals.
void WritePredictions(std::span<const PredictionRecord> records,
                      const std::string &path);
std::vector<PredictionRecord> ReadPredictions(const std::string &path);

// Weighted mean per pair, ordered like the first set. Weights default to
// uniform; they must be nonnegative and not all zero. Throws AlignmentError
// when the sets do not cover the same pair ids.
std::vector<PredictionRecord> EnsembleAverage(
    std::span<const std::vector<PredictionRecord>> predictions,
    std::span<const double> weights = {});
std::vector<PredictionRecord> EnsembleAverage(
    std::span<const std::string> paths, std::span<const double> weights = {});

}  // namespace xlmatch

#endif  // XLMATCH_EVALKIT_H_
