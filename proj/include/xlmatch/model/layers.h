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

#ifndef XLMATCH_MODEL_LAYERS_H_
#define XLMATCH_MODEL_LAYERS_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xlmatch/model/parameters.h"
#include "xlmatch/random.h"

// Building blocks of the matcher with explicit forward and backward passes.
// An embedded sentence is a matrix with one column per position
// (embed_dim x max_len); `length` is the number of real tokens. Backward
// passes accumulate into Parameter::grad and into the given input gradient.

namespace xlmatch {

enum class Phase {
  kTrain,  // batch-norm batch statistics, dropout active
  kInfer,  // batch-norm moving statistics, no dropout
};

// 1-D convolution of width `kernel` followed by ReLU and global max pooling
// over time. Windows start at every real token position that leaves room
// for the kernel, so windows may extend into padding but never start there.
// An empty sentence still gets the single window at position 0.
class ConvMaxPool {
 public:
  struct Cache {
    Eigen::MatrixXd windows;   // (kernel * dim) x num_windows
    std::vector<int> argmax;   // per filter
    Eigen::VectorXd pooled;    // pre-activation maximum per filter
  };

  ConvMaxPool(ParameterStore &store, const std::string &prefix, int kernel,
              int filters, int input_dim, Rng &rng);

  Eigen::VectorXd Forward(const ParameterStore &store,
                          const Eigen::MatrixXd &x, int length,
                          Cache *cache) const;
  void Backward(ParameterStore &store, const Cache &cache,
                const Eigen::VectorXd &dout, Eigen::MatrixXd *dx) const;

  int kernel() const { return kernel_; }
  int output_dim() const { return filters_; }

 private:
  int kernel_;
  int filters_;
  int input_dim_;
  ParameterStore::Id weight_;
  ParameterStore::Id bias_;
};

// Single-layer LSTM returning the hidden state after the last real token.
// Gates are stacked [input; forget; cell; output]. With reverse set the
// sentence is read from its last real token back to the first.
class Lstm {
 public:
  struct Cache {
    int length = 0;
    Eigen::MatrixXd inputs;  // dim x length, in processing order
    Eigen::MatrixXd gates;   // 4H x length, after activation
    Eigen::MatrixXd cells;   // H x length
    Eigen::MatrixXd hidden;  // H x length
  };

  Lstm(ParameterStore &store, const std::string &prefix, int input_dim,
       int hidden, bool reverse, Rng &rng);

  Eigen::VectorXd Forward(const ParameterStore &store,
                          const Eigen::MatrixXd &x, int length,
                          Cache *cache) const;
  void Backward(ParameterStore &store, const Cache &cache,
                const Eigen::VectorXd &dout, Eigen::MatrixXd *dx) const;

  int output_dim() const { return hidden_; }

 private:
  int hidden_;
  bool reverse_;
  ParameterStore::Id kernel_;
  ParameterStore::Id recurrent_;
  ParameterStore::Id bias_;
};

// Feed-forward classifier over a batch (one column per example):
// [affine -> batch norm -> ReLU -> dropout] per hidden layer, then an affine
// map to one logit.
class MlpHead {
 public:
  static constexpr double kBatchNormEpsilon = 1e-3;
  static constexpr double kBatchNormMomentum = 0.9;

  struct LayerCache {
    Eigen::MatrixXd input;
    Eigen::MatrixXd normalized;  // x-hat
    Eigen::MatrixXd activated;   // gamma * x-hat + beta, before ReLU
    Eigen::MatrixXd mask;        // dropout scale, empty when inactive
    Eigen::VectorXd inv_std;
    Eigen::VectorXd batch_mean;
    Eigen::VectorXd batch_var;
  };
  struct Cache {
    Phase phase = Phase::kInfer;
    std::vector<LayerCache> layers;
    Eigen::MatrixXd last;  // input of the output layer
  };

  MlpHead(ParameterStore &store, int input_dim,
          const std::vector<int> &hidden, double dropout_rate, Rng &rng);

  // rng is only used for dropout in Phase::kTrain.
  Eigen::RowVectorXd Forward(const ParameterStore &store,
                             const Eigen::MatrixXd &x, Phase phase, Rng *rng,
                             Cache *cache) const;
  // Returns the gradient with respect to the head input.
  Eigen::MatrixXd Backward(ParameterStore &store, const Cache &cache,
                           const Eigen::RowVectorXd &dlogits) const;
  // Folds the batch statistics of a kTrain forward pass into the moving
  // averages.
  void UpdateMovingStatistics(ParameterStore &store, const Cache &cache) const;

 private:
  struct Layer {
    ParameterStore::Id kernel, bias, gamma, beta, moving_mean, moving_var;
  };

  double dropout_rate_;
  std::vector<Layer> layers_;
  ParameterStore::Id out_kernel_;
  ParameterStore::Id out_bias_;
};

}  // namespace xlmatch

#endif  // XLMATCH_MODEL_LAYERS_H_
