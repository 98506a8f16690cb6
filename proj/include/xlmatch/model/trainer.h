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

#ifndef XLMATCH_MODEL_TRAINER_H_
#define XLMATCH_MODEL_TRAINER_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "xlmatch/corpus.h"
#include "xlmatch/model/config.h"
#include "xlmatch/model/matcher.h"
#include "xlmatch/model/parameters.h"

namespace xlmatch {

// Adam with lazy updates for column-sparse parameters: only columns touched
// in the current step have their moments and values updated.
class AdamOptimizer {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-7;

  explicit AdamOptimizer(double learning_rate);

  // Applies one update from the gradients currently in `store`.
  void Step(ParameterStore &store);

  int64_t steps() const { return step_; }

 private:
  double learning_rate_;
  int64_t step_ = 0;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
};

struct LabeledPairs {
  std::vector<EncodedPair> pairs;
  std::vector<int> labels;
};

// Shuffled mini-batch training. The weights of the epoch with the lowest
// validation loss are kept; without a validation set the last epoch wins.
// Throws ArgumentError for empty data, epochs < 1 or missing labels.
TrainingLog Train(Matcher &matcher, const LabeledPairs &train,
                  const LabeledPairs *validation,
                  const TrainingOptions &options);

// Encodes the pairs with the matcher first. Every pair needs a label.
TrainingLog Train(Matcher &matcher, std::span<const SentencePair> train,
                  std::span<const SentencePair> validation,
                  const TrainingOptions &options);

LabeledPairs EncodeLabeled(const Matcher &matcher,
                           std::span<const SentencePair> pairs);

}  // namespace xlmatch

#endif  // XLMATCH_MODEL_TRAINER_H_
