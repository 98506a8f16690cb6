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

#include "xlmatch/model/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "xlmatch/errors.h"
#include "xlmatch/random.h"

namespace xlmatch {
namespace {

constexpr size_t kEvaluationChunk = 512;

void CheckLabeled(const LabeledPairs &data, const char *what) {
  if (data.pairs.size() != data.labels.size()) {
    throw ArgumentError(std::string(what) + ": " +
                        std::to_string(data.pairs.size()) + " pairs but " +
                        std::to_string(data.labels.size()) + " labels");
  }
  for (int label : data.labels) {
    if (label != 0 && label != 1) {
      throw ArgumentError(std::string(what) + ": labels must be 0 or 1");
    }
  }
}

double MeanLoss(const Matcher &matcher, const LabeledPairs &data) {
  double total = 0;
  const size_t n = data.pairs.size();
  for (size_t start = 0; start < n; start += kEvaluationChunk) {
    const size_t count = std::min(kEvaluationChunk, n - start);
    const double loss = matcher.Loss(
        std::span<const EncodedPair>(data.pairs).subspan(start, count),
        std::span<const int>(data.labels).subspan(start, count), Phase::kInfer,
        nullptr);
    total += loss * static_cast<double>(count);
  }
  return total / static_cast<double>(n);
}

std::vector<Eigen::MatrixXd> Snapshot(const ParameterStore &store) {
  std::vector<Eigen::MatrixXd> values;
  values.reserve(store.all().size());
  for (const Parameter &p : store.all()) values.push_back(p.value);
  return values;
}

void Restore(ParameterStore &store, const std::vector<Eigen::MatrixXd> &values) {
  for (size_t i = 0; i < values.size(); ++i) store.all()[i].value = values[i];
}

}  // namespace

AdamOptimizer::AdamOptimizer(double learning_rate)
    : learning_rate_(learning_rate) {
  if (!(learning_rate > 0)) {
    throw ArgumentError("learning rate must be positive");
  }
}

void AdamOptimizer::Step(ParameterStore &store) {
  std::vector<Parameter> &params = store.all();
  if (m_.size() != params.size()) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
      if (!params[i].trainable) continue;
      m_[i] = Eigen::MatrixXd::Zero(params[i].value.rows(), params[i].value.cols());
      v_[i] = m_[i];
    }
  }
  ++step_;
  const double correction1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_));
  const double rate = learning_rate_ * std::sqrt(correction2) / correction1;

  auto update = [&](auto &&value, auto &&grad, auto &&m, auto &&v) {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseAbs2();
    value.array() -= rate * m.array() / (v.array().sqrt() + kEpsilon);
  };

  for (size_t i = 0; i < params.size(); ++i) {
    Parameter &p = params[i];
    if (!p.trainable) continue;
    if (p.sparse_columns) {
      for (int col : p.touched) {
        if (col == p.frozen_column) continue;
        update(p.value.col(col), p.grad.col(col), m_[i].col(col),
               v_[i].col(col));
      }
    } else {
      update(p.value, p.grad, m_[i], v_[i]);
    }
  }
}

TrainingLog Train(Matcher &matcher, const LabeledPairs &train,
                  const LabeledPairs *validation,
                  const TrainingOptions &options) {
  if (train.pairs.empty()) throw ArgumentError("training set is empty");
  if (options.epochs < 1) throw ArgumentError("epochs must be at least 1");
  if (options.batch_size < 1) {
    throw ArgumentError("batch_size must be at least 1");
  }
  if (options.patience < 0) throw ArgumentError("patience must be >= 0");
  CheckLabeled(train, "training set");
  const bool validate = validation != nullptr && !validation->pairs.empty();
  if (validate) CheckLabeled(*validation, "validation set");

  Rng rng(options.seed);
  AdamOptimizer optimizer(options.learning_rate);
  ParameterStore &store = matcher.parameters();
  TrainingLog log;

  std::vector<size_t> order(train.pairs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const size_t batch_size = static_cast<size_t>(options.batch_size);

  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Eigen::MatrixXd> best;
  int since_best = 0;

  std::vector<EncodedPair> batch;
  std::vector<int> labels;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    rng.Shuffle(order);
    double epoch_loss = 0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
      const size_t end = std::min(order.size(), start + batch_size);
      batch.clear();
      labels.clear();
      for (size_t k = start; k < end; ++k) {
        batch.push_back(train.pairs[order[k]]);
        labels.push_back(train.labels[order[k]]);
      }
      store.ZeroGrad();
      const double loss =
          matcher.ForwardBackward(batch, labels, Phase::kTrain, &rng);
      optimizer.Step(store);
      epoch_loss += loss * static_cast<double>(end - start);
    }
    epoch_loss /= static_cast<double>(order.size());
    log.train_loss.push_back(epoch_loss);

    if (!validate) {
      log.best_epoch = epoch;
      spdlog::info("epoch {}: train loss {:.4f}", epoch, epoch_loss);
      continue;
    }
    const double val_loss = MeanLoss(matcher, *validation);
    log.val_loss.push_back(val_loss);
    spdlog::info("epoch {}: train loss {:.4f}, validation loss {:.4f}", epoch,
                 epoch_loss, val_loss);
    if (val_loss < best_loss) {
      best_loss = val_loss;
      best = Snapshot(store);
      log.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= options.patience && options.patience > 0) {
      spdlog::info("early stop after epoch {}", epoch);
      break;
    }
  }
  if (validate && !best.empty()) Restore(store, best);
  store.ZeroGrad();
  matcher.training_log() = log;
  return log;
}

LabeledPairs EncodeLabeled(const Matcher &matcher,
                           std::span<const SentencePair> pairs) {
  LabeledPairs out;
  out.pairs = matcher.EncodePairs(pairs);
  out.labels.reserve(pairs.size());
  for (const SentencePair &pair : pairs) {
    if (!pair.label) {
      throw ArgumentError("pair " + pair.id + " has no label");
    }
    out.labels.push_back(*pair.label);
  }
  return out;
}

TrainingLog Train(Matcher &matcher, std::span<const SentencePair> train,
                  std::span<const SentencePair> validation,
                  const TrainingOptions &options) {
  if (train.empty()) throw ArgumentError("training set is empty");
  const LabeledPairs train_data = EncodeLabeled(matcher, train);
  if (validation.empty()) return Train(matcher, train_data, nullptr, options);
  const LabeledPairs val_data = EncodeLabeled(matcher, validation);
  return Train(matcher, train_data, &val_data, options);
}

}  // namespace xlmatch
