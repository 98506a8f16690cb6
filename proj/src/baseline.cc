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

#include "xlmatch/baseline.h"

#include <algorithm>
#include <cmath>

#include "xlmatch/errors.h"
#include "xlmatch/unicode.h"

namespace xlmatch {
namespace {

constexpr int kMaxNewtonIterations = 100;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double PenalizedLogLikelihood(std::span<const double> x,
                              std::span<const int> y, double a, double b) {
  double total = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double z = a * x[i] + b;
    // log sigmoid(z) = -softplus(-z)
    const double softplus_neg = std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    total += y[i] ? -softplus_neg : -softplus_neg - z;
  }
  return total - 0.5 * kCalibrationPenalty * a * a;
}

}  // namespace

NgramProfile BuildNgramProfile(std::string_view sentence, int n, bool pad) {
  if (n < 1) throw ArgumentError("n-gram order must be at least 1");
  std::u32string text = unicode::Decode(unicode::FoldCase(sentence));
  if (pad) {
    text = std::u32string(n - 1, kNgramStart) + text +
           std::u32string(n - 1, kNgramEnd);
  }
  NgramProfile profile;
  profile.n = n;
  if (text.size() < static_cast<size_t>(n)) return profile;
  for (size_t i = 0; i + n <= text.size(); ++i) {
    ++profile.counts[unicode::Encode(std::u32string_view(text).substr(i, n))];
  }
  return profile;
}

double ProfileCosine(const NgramProfile &a, const NgramProfile &b) {
  if (a.counts.empty() && b.counts.empty()) return 1.0;
  if (a.counts.empty() || b.counts.empty()) return 0.0;
  double dot = 0;
  double norm_a = 0;
  double norm_b = 0;
  for (const auto &[gram, count] : a.counts) {
    norm_a += static_cast<double>(count) * count;
    const auto it = b.counts.find(gram);
    if (it != b.counts.end()) dot += static_cast<double>(count) * it->second;
  }
  for (const auto &[gram, count] : b.counts) {
    norm_b += static_cast<double>(count) * count;
  }
  return std::clamp(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), 0.0, 1.0);
}

double CharNgramSimilarity(std::string_view a, std::string_view b, int n,
                           bool pad) {
  return ProfileCosine(BuildNgramProfile(a, n, pad), BuildNgramProfile(b, n, pad));
}

double Calibration::Probability(double similarity) const {
  return Sigmoid(slope * similarity + intercept);
}

Calibration FitLogistic(std::span<const double> feature,
                        std::span<const int> labels) {
  if (feature.size() != labels.size()) {
    throw ArgumentError("feature and label counts differ");
  }
  if (feature.empty()) throw ArgumentError("no calibration data");
  size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("labels must be 0 or 1");
    positives += y;
  }
  if (positives == 0 || positives == labels.size()) {
    throw CalibrationError("calibration needs both positive and negative pairs");
  }

  double a = 0;
  const double prior = static_cast<double>(positives) / labels.size();
  double b = std::log(prior / (1 - prior));
  double current = PenalizedLogLikelihood(feature, labels, a, b);
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    double ga = -kCalibrationPenalty * a;
    double gb = 0;
    double haa = kCalibrationPenalty;
    double hab = 0;
    double hbb = 0;
    for (size_t i = 0; i < feature.size(); ++i) {
      const double p = Sigmoid(a * feature[i] + b);
      const double r = labels[i] - p;
      const double w = p * (1 - p);
      ga += r * feature[i];
      gb += r;
      haa += w * feature[i] * feature[i];
      hab += w * feature[i];
      hbb += w;
    }
    const double det = haa * hbb - hab * hab;
    if (!(det > 0)) break;
    const double da = (hbb * ga - hab * gb) / det;
    const double db = (haa * gb - hab * ga) / det;
    // Halve the Newton step until the objective does not decrease.
    double step = 1.0;
    double next = 0;
    for (int k = 0; k < 30; ++k, step *= 0.5) {
      next = PenalizedLogLikelihood(feature, labels, a + step * da, b + step * db);
      if (next >= current) break;
    }
    if (next < current) break;
    a += step * da;
    b += step * db;
    const double gain = next - current;
    current = next;
    if (gain < 1e-12) break;
  }
  return {a, b};
}

Calibration CalibrateBaseline(std::span<const SentencePair> pairs, int n,
                              bool pad) {
  std::vector<double> similarity;
  std::vector<int> labels;
  for (const SentencePair &pair : pairs) {
    if (!pair.label) continue;
    similarity.push_back(CharNgramSimilarity(pair.first, pair.second, n, pad));
    labels.push_back(*pair.label);
  }
  if (labels.empty()) throw CalibrationError("no labeled pairs to calibrate on");
  return FitLogistic(similarity, labels);
}

std::vector<PredictionRecord> PredictBaseline(
    std::span<const SentencePair> pairs, const Calibration &calibration, int n,
    bool pad) {
  std::vector<PredictionRecord> out;
  out.reserve(pairs.size());
  for (const SentencePair &pair : pairs) {
    out.push_back({pair.id, calibration.Probability(CharNgramSimilarity(
                                pair.first, pair.second, n, pad))});
  }
  return out;
}

}  // namespace xlmatch
