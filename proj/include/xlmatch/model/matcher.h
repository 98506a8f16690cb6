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

#ifndef XLMATCH_MODEL_MATCHER_H_
#define XLMATCH_MODEL_MATCHER_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xlmatch/corpus.h"
#include "xlmatch/embeddings.h"
#include "xlmatch/model/config.h"
#include "xlmatch/model/layers.h"
#include "xlmatch/model/parameters.h"
#include "xlmatch/prediction.h"
#include "xlmatch/textprep.h"
#include "xlmatch/vocabulary.h"

namespace xlmatch {

struct EncodedPair {
  EncodedSequence first;
  EncodedSequence second;
};

struct TrainingLog {
  std::vector<double> train_loss;
  // Empty when training ran without a validation set.
  std::vector<double> val_loss;
  // 1-based epoch whose weights were kept; 0 before training.
  int best_epoch = 0;
};

// Siamese sentence matcher. Both sentences of a pair go through the same
// encoder (conv n-gram detectors, an LSTM and a BiLSTM, each optional) and
// the representations r1, r2 are compared by an MLP over [|r1 - r2|; r1 * r2].
//
// The matcher owns its vocabulary and explicit OOV fixes so that a saved
// model can encode raw text on its own.
class Matcher {
 public:
  // Embedding rows are copied from `embeddings` (embed_dim x vocab.rows());
  // the padding row is zeroed and frozen. Throws ConfigError for an invalid
  // config or mismatched embedding shape.
  Matcher(const ModelConfig &config, Vocabulary vocab,
          const Eigen::MatrixXd &embeddings,
          std::map<std::string, std::string> explicit_fixes = {});

  static Matcher Build(const ModelConfig &config, const EmbeddingTable &table,
                       std::map<std::string, std::string> explicit_fixes = {});

  Matcher(const Matcher &other);
  Matcher &operator=(const Matcher &other);
  Matcher(Matcher &&other) noexcept;
  Matcher &operator=(Matcher &&other) noexcept;

  const ModelConfig &config() const { return config_; }
  const Vocabulary &vocabulary() const { return vocab_; }
  const std::map<std::string, std::string> &explicit_fixes() const {
    return repair_.explicit_fixes();
  }
  const RepairTable &repair_table() const { return repair_; }
  int representation_dim() const { return config_.RepresentationDim(); }
  int head_input_dim() const { return config_.HeadInputDim(); }

  ParameterStore &parameters() { return params_; }
  const ParameterStore &parameters() const { return params_; }
  TrainingLog &training_log() { return log_; }
  const TrainingLog &training_log() const { return log_; }

  // Tokenize, repair and pad/truncate to max_len.
  EncodedSequence Encode(std::string_view sentence) const;
  std::vector<EncodedPair> EncodePairs(std::span<const SentencePair> pairs) const;

  // Inference-mode sentence representation. Throws ShapeError when the
  // sequence does not have max_len entries or indexes outside the table.
  Eigen::VectorXd Represent(const EncodedSequence &sequence) const;

  double MatchProbability(const EncodedSequence &first,
                          const EncodedSequence &second) const;
  std::vector<double> Probabilities(std::span<const EncodedPair> pairs) const;

  // Mean binary cross-entropy of the batch, with gradients accumulated into
  // parameters(). In Phase::kTrain batch norm uses batch statistics (and
  // updates its moving averages) and dropout draws from rng.
  double ForwardBackward(std::span<const EncodedPair> batch,
                         std::span<const int> labels, Phase phase, Rng *rng);

  // Same loss without gradients or side effects.
  double Loss(std::span<const EncodedPair> batch, std::span<const int> labels,
              Phase phase, Rng *rng) const;

 private:
  struct EncoderCache {
    Eigen::MatrixXd embedded;
    std::vector<ConvMaxPool::Cache> conv;
    Lstm::Cache lstm;
    Lstm::Cache forward;
    Lstm::Cache backward;
  };

  void CheckSequence(const EncodedSequence &sequence) const;
  Eigen::VectorXd EncodeForward(const EncodedSequence &sequence,
                                EncoderCache *cache) const;
  void EncodeBackward(const EncodedSequence &sequence,
                      const EncoderCache &cache, const Eigen::VectorXd &drep);
  Eigen::VectorXd PairFeatures(const Eigen::VectorXd &r1,
                               const Eigen::VectorXd &r2) const;

  ModelConfig config_;
  Vocabulary vocab_;
  RepairTable repair_;
  ParameterStore params_;
  ParameterStore::Id embedding_;
  std::vector<ConvMaxPool> convs_;
  std::optional<Lstm> lstm_;
  std::optional<Lstm> bilstm_forward_;
  std::optional<Lstm> bilstm_backward_;
  std::optional<MlpHead> head_;
  TrainingLog log_;
};

// One record per pair, in input order.
std::vector<PredictionRecord> PredictBatch(const Matcher &matcher,
                                           std::span<const SentencePair> pairs);

}  // namespace xlmatch

#endif  // XLMATCH_MODEL_MATCHER_H_
