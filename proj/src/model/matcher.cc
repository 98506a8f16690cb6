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

#include "xlmatch/model/matcher.h"

#include <cmath>

#include "xlmatch/errors.h"

namespace xlmatch {
namespace {

constexpr size_t kInferenceChunk = 256;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -[y log sigmoid(s) + (1 - y) log(1 - sigmoid(s))], computed from the logit.
double BinaryCrossEntropyFromLogit(double logit, int label) {
  const double softplus =
      std::max(logit, 0.0) + std::log1p(std::exp(-std::abs(logit)));
  return softplus - label * logit;
}

}  // namespace

Matcher::Matcher(const ModelConfig &config, Vocabulary vocab,
                 const Eigen::MatrixXd &embeddings,
                 std::map<std::string, std::string> explicit_fixes)
    : config_(config),
      vocab_(std::move(vocab)),
      repair_(vocab_, std::move(explicit_fixes)) {
  config_.Validate();
  if (embeddings.rows() != config_.embed_dim) {
    throw ConfigError("embedding dimension " +
                      std::to_string(embeddings.rows()) +
                      " does not match embed_dim " +
                      std::to_string(config_.embed_dim));
  }
  if (embeddings.cols() != vocab_.rows()) {
    throw ConfigError("embedding matrix has " +
                      std::to_string(embeddings.cols()) + " rows, expected " +
                      std::to_string(vocab_.rows()));
  }

  Rng rng(config_.seed);
  const int dim = config_.embed_dim;
  embedding_ = params_.Add("embedding", dim, vocab_.rows(),
                           config_.train_embeddings);
  Parameter &table = params_[embedding_];
  table.value = embeddings;
  table.value.col(vocab_.pad_index()).setZero();
  table.sparse_columns = true;
  table.frozen_column = vocab_.pad_index();

  if (config_.use_conv) {
    for (size_t i = 0; i < config_.kernel_sizes.size(); ++i) {
      convs_.emplace_back(params_, "conv_" + std::to_string(i + 1),
                          config_.kernel_sizes[i], config_.conv_filters, dim,
                          rng);
    }
  }
  if (config_.use_lstm) {
    lstm_.emplace(params_, "lstm", dim, config_.hidden_size, false, rng);
  }
  if (config_.use_bilstm) {
    bilstm_forward_.emplace(params_, "bilstm_forward", dim,
                            config_.hidden_size, false, rng);
    bilstm_backward_.emplace(params_, "bilstm_backward", dim,
                             config_.hidden_size, true, rng);
  }
  head_.emplace(params_, config_.HeadInputDim(), config_.mlp_hidden,
                config_.dropout_rate, rng);
}

Matcher Matcher::Build(const ModelConfig &config, const EmbeddingTable &table,
                       std::map<std::string, std::string> explicit_fixes) {
  if (table.dim != config.embed_dim) {
    throw ConfigError("embedding table has dimension " +
                      std::to_string(table.dim) + " but embed_dim is " +
                      std::to_string(config.embed_dim));
  }
  return Matcher(config, table.vocab, table.vectors, std::move(explicit_fixes));
}

Matcher::Matcher(const Matcher &other)
    : config_(other.config_),
      vocab_(other.vocab_),
      repair_(vocab_, other.repair_.explicit_fixes()),
      params_(other.params_),
      embedding_(other.embedding_),
      convs_(other.convs_),
      lstm_(other.lstm_),
      bilstm_forward_(other.bilstm_forward_),
      bilstm_backward_(other.bilstm_backward_),
      head_(other.head_),
      log_(other.log_) {}

Matcher &Matcher::operator=(const Matcher &other) {
  if (this != &other) {
    Matcher copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Matcher::Matcher(Matcher &&other) noexcept
    : config_(std::move(other.config_)),
      vocab_(std::move(other.vocab_)),
      repair_(vocab_, other.repair_.explicit_fixes()),
      params_(std::move(other.params_)),
      embedding_(other.embedding_),
      convs_(std::move(other.convs_)),
      lstm_(std::move(other.lstm_)),
      bilstm_forward_(std::move(other.bilstm_forward_)),
      bilstm_backward_(std::move(other.bilstm_backward_)),
      head_(std::move(other.head_)),
      log_(std::move(other.log_)) {}

Matcher &Matcher::operator=(Matcher &&other) noexcept {
  if (this != &other) {
    config_ = std::move(other.config_);
    vocab_ = std::move(other.vocab_);
    repair_ = RepairTable(vocab_, other.repair_.explicit_fixes());
    params_ = std::move(other.params_);
    embedding_ = other.embedding_;
    convs_ = std::move(other.convs_);
    lstm_ = std::move(other.lstm_);
    bilstm_forward_ = std::move(other.bilstm_forward_);
    bilstm_backward_ = std::move(other.bilstm_backward_);
    head_ = std::move(other.head_);
    log_ = std::move(other.log_);
  }
  return *this;
}

EncodedSequence Matcher::Encode(std::string_view sentence) const {
  return EncodeSequence(Tokenize(sentence), vocab_, repair_, config_.max_len);
}

std::vector<EncodedPair> Matcher::EncodePairs(
    std::span<const SentencePair> pairs) const {
  std::vector<EncodedPair> out;
  out.reserve(pairs.size());
  for (const SentencePair &pair : pairs) {
    out.push_back({Encode(pair.first), Encode(pair.second)});
  }
  return out;
}

void Matcher::CheckSequence(const EncodedSequence &sequence) const {
  if (static_cast<int>(sequence.indices.size()) != config_.max_len) {
    throw ShapeError("sequence has length " +
                     std::to_string(sequence.indices.size()) +
                     ", model expects max_len " +
                     std::to_string(config_.max_len));
  }
  if (sequence.true_length < 0 || sequence.true_length > config_.max_len) {
    throw ShapeError("true_length out of range");
  }
  for (int index : sequence.indices) {
    if (index < 0 || index >= vocab_.rows()) {
      throw ShapeError("token index " + std::to_string(index) +
                       " outside the embedding table");
    }
  }
}

Eigen::VectorXd Matcher::EncodeForward(const EncodedSequence &sequence,
                                       EncoderCache *cache) const {
  CheckSequence(sequence);
  EncoderCache local;
  EncoderCache &c = cache != nullptr ? *cache : local;
  const Eigen::MatrixXd &table = params_[embedding_].value;
  const int length = sequence.true_length;

  // Positions past true_length read as zero vectors whatever they index.
  c.embedded = Eigen::MatrixXd::Zero(config_.embed_dim, config_.max_len);
  for (int t = 0; t < length; ++t) {
    c.embedded.col(t) = table.col(sequence.indices[t]);
  }

  Eigen::VectorXd rep(representation_dim());
  Eigen::Index offset = 0;
  c.conv.resize(convs_.size());
  for (size_t i = 0; i < convs_.size(); ++i) {
    rep.segment(offset, convs_[i].output_dim()) =
        convs_[i].Forward(params_, c.embedded, length, &c.conv[i]);
    offset += convs_[i].output_dim();
  }
  if (lstm_) {
    rep.segment(offset, lstm_->output_dim()) =
        lstm_->Forward(params_, c.embedded, length, &c.lstm);
    offset += lstm_->output_dim();
  }
  if (bilstm_forward_) {
    rep.segment(offset, bilstm_forward_->output_dim()) =
        bilstm_forward_->Forward(params_, c.embedded, length, &c.forward);
    offset += bilstm_forward_->output_dim();
    rep.segment(offset, bilstm_backward_->output_dim()) =
        bilstm_backward_->Forward(params_, c.embedded, length, &c.backward);
  }
  return rep;
}

void Matcher::EncodeBackward(const EncodedSequence &sequence,
                             const EncoderCache &cache,
                             const Eigen::VectorXd &drep) {
  Parameter &table = params_[embedding_];
  const bool need_input_grad = table.trainable;
  Eigen::MatrixXd dx;
  if (need_input_grad) dx = Eigen::MatrixXd::Zero(config_.embed_dim, config_.max_len);
  Eigen::MatrixXd *dx_ptr = need_input_grad ? &dx : nullptr;

  Eigen::Index offset = 0;
  for (size_t i = 0; i < convs_.size(); ++i) {
    convs_[i].Backward(params_, cache.conv[i],
                       drep.segment(offset, convs_[i].output_dim()), dx_ptr);
    offset += convs_[i].output_dim();
  }
  if (lstm_) {
    lstm_->Backward(params_, cache.lstm,
                    drep.segment(offset, lstm_->output_dim()), dx_ptr);
    offset += lstm_->output_dim();
  }
  if (bilstm_forward_) {
    bilstm_forward_->Backward(
        params_, cache.forward,
        drep.segment(offset, bilstm_forward_->output_dim()), dx_ptr);
    offset += bilstm_forward_->output_dim();
    bilstm_backward_->Backward(
        params_, cache.backward,
        drep.segment(offset, bilstm_backward_->output_dim()), dx_ptr);
  }

  if (!need_input_grad) return;
  for (int t = 0; t < sequence.true_length; ++t) {
    const int index = sequence.indices[t];
    if (index == table.frozen_column) continue;
    table.grad.col(index) += dx.col(t);
    table.Touch(index);
  }
}

Eigen::VectorXd Matcher::PairFeatures(const Eigen::VectorXd &r1,
                                      const Eigen::VectorXd &r2) const {
  const Eigen::Index dim = r1.size();
  Eigen::VectorXd features(2 * dim);
  if (config_.absolute_difference) {
    features.head(dim) = (r1 - r2).cwiseAbs();
  } else {
    features.head(dim) = r1 - r2;
  }
  features.tail(dim) = r1.cwiseProduct(r2);
  return features;
}

Eigen::VectorXd Matcher::Represent(const EncodedSequence &sequence) const {
  return EncodeForward(sequence, nullptr);
}

double Matcher::MatchProbability(const EncodedSequence &first,
                                 const EncodedSequence &second) const {
  const EncodedPair pair{first, second};
  return Probabilities(std::span<const EncodedPair>(&pair, 1)).front();
}

std::vector<double> Matcher::Probabilities(
    std::span<const EncodedPair> pairs) const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (size_t start = 0; start < pairs.size(); start += kInferenceChunk) {
    const size_t end = std::min(pairs.size(), start + kInferenceChunk);
    Eigen::MatrixXd features(head_input_dim(), end - start);
    for (size_t b = start; b < end; ++b) {
      features.col(b - start) =
          PairFeatures(Represent(pairs[b].first), Represent(pairs[b].second));
    }
    const Eigen::RowVectorXd logits =
        head_->Forward(params_, features, Phase::kInfer, nullptr, nullptr);
    for (Eigen::Index b = 0; b < logits.size(); ++b) {
      out.push_back(Sigmoid(logits(b)));
    }
  }
  return out;
}

double Matcher::Loss(std::span<const EncodedPair> batch,
                     std::span<const int> labels, Phase phase,
                     Rng *rng) const {
  if (batch.empty() || batch.size() != labels.size()) {
    throw ArgumentError("batch and labels must be non-empty and equally long");
  }
  Eigen::MatrixXd features(head_input_dim(), batch.size());
  for (size_t b = 0; b < batch.size(); ++b) {
    features.col(b) =
        PairFeatures(Represent(batch[b].first), Represent(batch[b].second));
  }
  const Eigen::RowVectorXd logits =
      head_->Forward(params_, features, phase, rng, nullptr);
  double loss = 0;
  for (size_t b = 0; b < batch.size(); ++b) {
    loss += BinaryCrossEntropyFromLogit(logits(b), labels[b]);
  }
  return loss / static_cast<double>(batch.size());
}

double Matcher::ForwardBackward(std::span<const EncodedPair> batch,
                                std::span<const int> labels, Phase phase,
                                Rng *rng) {
  if (batch.empty() || batch.size() != labels.size()) {
    throw ArgumentError("batch and labels must be non-empty and equally long");
  }
  const size_t n = batch.size();
  const Eigen::Index dim = representation_dim();
  std::vector<EncoderCache> first(n);
  std::vector<EncoderCache> second(n);
  Eigen::MatrixXd r1(dim, n);
  Eigen::MatrixXd r2(dim, n);
  Eigen::MatrixXd features(2 * dim, n);
  for (size_t b = 0; b < n; ++b) {
    r1.col(b) = EncodeForward(batch[b].first, &first[b]);
    r2.col(b) = EncodeForward(batch[b].second, &second[b]);
    features.col(b) = PairFeatures(r1.col(b), r2.col(b));
  }

  MlpHead::Cache head_cache;
  const Eigen::RowVectorXd logits =
      head_->Forward(params_, features, phase, rng, &head_cache);
  double loss = 0;
  Eigen::RowVectorXd dlogits(n);
  for (size_t b = 0; b < n; ++b) {
    loss += BinaryCrossEntropyFromLogit(logits(b), labels[b]);
    dlogits(b) = (Sigmoid(logits(b)) - labels[b]) / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);

  const Eigen::MatrixXd dfeatures = head_->Backward(params_, head_cache, dlogits);
  for (size_t b = 0; b < n; ++b) {
    const Eigen::VectorXd ddiff = dfeatures.col(b).head(dim);
    const Eigen::VectorXd dprod = dfeatures.col(b).tail(dim);
    Eigen::VectorXd sign;
    if (config_.absolute_difference) {
      sign = (r1.col(b) - r2.col(b)).unaryExpr([](double v) {
        return static_cast<double>((v > 0) - (v < 0));
      });
    } else {
      sign = Eigen::VectorXd::Ones(dim);
    }
    const Eigen::VectorXd dr1 =
        ddiff.cwiseProduct(sign) + dprod.cwiseProduct(r2.col(b));
    const Eigen::VectorXd dr2 =
        -ddiff.cwiseProduct(sign) + dprod.cwiseProduct(r1.col(b));
    EncodeBackward(batch[b].first, first[b], dr1);
    EncodeBackward(batch[b].second, second[b], dr2);
  }
  if (phase == Phase::kTrain) head_->UpdateMovingStatistics(params_, head_cache);
  return loss;
}

std::vector<PredictionRecord> PredictBatch(const Matcher &matcher,
                                           std::span<const SentencePair> pairs) {
  const std::vector<EncodedPair> encoded = matcher.EncodePairs(pairs);
  const std::vector<double> probabilities = matcher.Probabilities(encoded);
  std::vector<PredictionRecord> out;
  out.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    out.push_back({pairs[i].id, probabilities[i]});
  }
  return out;
}

}  // namespace xlmatch
