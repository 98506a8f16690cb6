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

#ifndef XLMATCH_BASELINE_H_
#define XLMATCH_BASELINE_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlmatch/corpus.h"
#include "xlmatch/prediction.h"

namespace xlmatch {

// Code points U+0002 and U+0003 mark the start and end of a sentence.
inline constexpr char32_t kNgramStart = 0x02;
inline constexpr char32_t kNgramEnd = 0x03;

struct NgramProfile {
  int n = 3;
  // UTF-8 encoded n-grams of exactly n code points.
  std::map<std::string, int> counts;
};

// Case-folded profile. With padding, n - 1 boundary markers are added on each
// side. Throws ArgumentError when n < 1.
NgramProfile BuildNgramProfile(std::string_view sentence, int n = 3,
                               bool pad = true);

// Cosine of the count vectors. Two empty profiles score 1, one empty
// profile scores 0.
double ProfileCosine(const NgramProfile &a, const NgramProfile &b);

double CharNgramSimilarity(std::string_view a, std::string_view b, int n = 3,
                           bool pad = true);

struct Calibration {
  double slope = 0;
  double intercept = 0;

  double Probability(double similarity) const;
};

// L2 penalty on the slope; keeps the fit finite on separable data.
inline constexpr double kCalibrationPenalty = 1e-4;

// Logistic fit of labels on a single feature, maximizing
//   sum_i log p(y_i | x_i) - kCalibrationPenalty / 2 * slope^2.
// Throws ArgumentError on empty or mismatched input and CalibrationError
// unless both labels occur.
Calibration FitLogistic(std::span<const double> feature,
                        std::span<const int> labels);

// Pairs without a label are skipped. Throws CalibrationError when no labeled
// pairs remain or only one label occurs.
Calibration CalibrateBaseline(std::span<const SentencePair> pairs, int n = 3,
                              bool pad = true);

std::vector<PredictionRecord> PredictBaseline(
    std::span<const SentencePair> pairs, const Calibration &calibration,
    int n = 3, bool pad = true);

}  // namespace xlmatch

#endif  // XLMATCH_BASELINE_H_
