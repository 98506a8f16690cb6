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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "test_support.h"
#include "xlmatch/errors.h"
#include "xlmatch/random.h"

namespace xlmatch {
namespace {

using ::xlmatch::testing::Join;
using ::xlmatch::testing::RandomWords;

TEST(NgramTest, Profiles) {
  const NgramProfile p = BuildNgramProfile("Abcd", 3, /*pad=*/false);
  EXPECT_EQ(p.counts, (std::map<std::string, int>{{"abc", 1}, {"bcd", 1}}));
  const NgramProfile padded = BuildNgramProfile("ab", 3);
  EXPECT_EQ(padded.counts.size(), 4u);
  EXPECT_EQ(padded.counts.count("\x02\x02" "a"), 1u);
  EXPECT_EQ(padded.counts.count("b\x03\x03"), 1u);
  EXPECT_TRUE(BuildNgramProfile("ab", 3, false).counts.empty());
  EXPECT_EQ(BuildNgramProfile("ñañ", 2, false).counts,
            (std::map<std::string, int>{{"ña", 1}, {"añ", 1}}));
  EXPECT_THROW(BuildNgramProfile("abc", 0), ArgumentError);
}

TEST(NgramTest, SimilarityExamples) {
  EXPECT_DOUBLE_EQ(CharNgramSimilarity("hola mundo", "hola mundo"), 1.0);
  EXPECT_DOUBLE_EQ(CharNgramSimilarity("Hola", "hOLA"), 1.0);
  EXPECT_DOUBLE_EQ(CharNgramSimilarity("aaa", "bbb", 3, false), 0.0);
  EXPECT_NEAR(CharNgramSimilarity("abcd", "bcde", 3, false), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(CharNgramSimilarity("", "", 3, false), 1.0);
  EXPECT_DOUBLE_EQ(CharNgramSimilarity("ab", "abcd", 3, false), 0.0);
}

TEST(NgramTest, SymmetricAndBounded) {
  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    const std::string a = Join(RandomWords(rng, 0, 6));
    const std::string b = Join(RandomWords(rng, 0, 6));
    const int n = 1 + static_cast<int>(rng.Below(4));
    const bool pad = rng.Below(2) == 0;
    const double ab = CharNgramSimilarity(a, b, n, pad);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_DOUBLE_EQ(ab, CharNgramSimilarity(b, a, n, pad));
    EXPECT_NEAR(CharNgramSimilarity(a, a, n, pad), 1.0, 1e-12);
  }
}

// Penalized negative log-likelihood, written out directly.
double Objective(const std::vector<double> &x, const std::vector<int> &y,
                 double slope, double intercept) {
  double total = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double z = slope * x[i] + intercept;
    const double p = 1.0 / (1.0 + std::exp(-z));
    total -= y[i] ? std::log(p) : std::log(1.0 - p);
  }
  return total + 0.5 * kCalibrationPenalty * slope * slope;
}

struct Sample {
  std::vector<double> x;
  std::vector<int> y;
};

Sample NoisySample(uint64_t seed, bool positive_trend) {
  Rng rng(seed);
  Sample s;
  for (int i = 0; i < 80; ++i) {
    const double x = rng.Uniform();
    const double p = positive_trend ? 0.1 + 0.8 * x : 0.9 - 0.8 * x;
    s.x.push_back(x);
    s.y.push_back(rng.Uniform() < p ? 1 : 0);
  }
  return s;
}

TEST(CalibrationTest, MatchesGridSearch) {
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    for (bool trend : {true, false}) {
      const Sample s = NoisySample(seed, trend);
      const Calibration fit = FitLogistic(s.x, s.y);
      double best = std::numeric_limits<double>::infinity();
      double best_slope = 0;
      for (double a = -10; a <= 10; a += 0.05) {
        for (double b = -6; b <= 6; b += 0.05) {
          const double v = Objective(s.x, s.y, a, b);
          if (v < best) {
            best = v;
            best_slope = a;
          }
        }
      }
      EXPECT_LE(Objective(s.x, s.y, fit.slope, fit.intercept), best + 1e-9);
      EXPECT_NEAR(fit.slope, best_slope, 0.1);
      EXPECT_EQ(fit.slope > 0, trend) << "seed " << seed;
    }
  }
}

TEST(CalibrationTest, MonotoneInSimilarity) {
  const Sample s = NoisySample(9, true);
  const Calibration fit = FitLogistic(s.x, s.y);
  double previous = -1;
  for (double x = 0; x <= 1.0; x += 0.01) {
    const double p = fit.Probability(x);
    EXPECT_GT(p, previous);
    previous = p;
  }
}

TEST(CalibrationTest, SeparableDataStaysFinite) {
  const std::vector<double> x = {0.1, 0.2, 0.15, 0.8, 0.9, 0.95};
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  const Calibration fit = FitLogistic(x, y);
  EXPECT_TRUE(std::isfinite(fit.slope));
  EXPECT_TRUE(std::isfinite(fit.intercept));
  for (size_t i = 3; i < 6; ++i) EXPECT_GE(fit.Probability(x[i]), 0.9);
  for (size_t i = 0; i < 3; ++i) EXPECT_LE(fit.Probability(x[i]), 0.1);
}

TEST(CalibrationTest, Errors) {
  const std::vector<double> x = {0.1, 0.5};
  EXPECT_THROW(FitLogistic(x, std::vector<int>{1, 1}), CalibrationError);
  EXPECT_THROW(FitLogistic(x, std::vector<int>{1}), ArgumentError);
  EXPECT_THROW(FitLogistic(x, std::vector<int>{1, 3}), ArgumentError);
  EXPECT_THROW(FitLogistic({}, {}), ArgumentError);
}

TEST(BaselineTest, CalibrateAndPredict) {
  const std::vector<SentencePair> train = {
      {"1", "quiero cancelar mi pedido", "quiero cancelar el pedido", 1},
      {"2", "dónde está mi paquete", "dónde está el paquete", 1},
      {"3", "cómo pago con tarjeta", "cómo pagar con tarjeta", 1},
      {"4", "quiero cancelar mi pedido", "tengo un cupón de descuento", 0},
      {"5", "dónde está mi paquete", "cambiar la contraseña", 0},
      {"6", "cómo pago con tarjeta", "el envío llegó roto", 0},
      {"7", "sin etiqueta", "sin etiqueta", std::nullopt}};
  const Calibration fit = CalibrateBaseline(train);
  EXPECT_GT(fit.slope, 0);
  const auto predictions = PredictBaseline(train, fit);
  ASSERT_EQ(predictions.size(), train.size());
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(predictions[i].pair_id, train[i].id);
    EXPECT_GE(predictions[i].probability, 0.9);
  }
  for (size_t i = 3; i < 6; ++i) EXPECT_LT(predictions[i].probability, 0.5);
  EXPECT_THROW(CalibrateBaseline(std::span(train).subspan(6)), CalibrationError);
}

}  // namespace
}  // namespace xlmatch
