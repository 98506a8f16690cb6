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

#ifndef XLMATCH_MODEL_PARAMETERS_H_
#define XLMATCH_MODEL_PARAMETERS_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xlmatch/random.h"

namespace xlmatch {

struct Parameter {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;
  // Non-trainable parameters (batch-norm moving statistics) are saved with
  // the model but never receive gradients.
  bool trainable = true;
  // Gradients arrive in a few columns at a time (embedding lookups); the
  // optimizer then only visits touched columns.
  bool sparse_columns = false;
  // Column kept constant during training (the padding row), or -1.
  int frozen_column = -1;
  std::vector<int> touched;

  void Touch(int column);
  void ZeroGrad();

 private:
  std::vector<char> is_touched_;
};

class ParameterStore {
 public:
  using Id = size_t;

  Id Add(std::string name, int rows, int cols, bool trainable = true);

  Parameter &operator[](Id id) { return params_[id]; }
  const Parameter &operator[](Id id) const { return params_[id]; }

  Parameter *Find(std::string_view name);
  const Parameter *Find(std::string_view name) const;

  std::vector<Parameter> &all() { return params_; }
  const std::vector<Parameter> &all() const { return params_; }

  void ZeroGrad();

 private:
  std::vector<Parameter> params_;
};

// Glorot/Xavier uniform: U(-l, l) with l = sqrt(6 / (fan_in + fan_out)).
void GlorotUniform(Eigen::MatrixXd &m, int fan_in, int fan_out, Rng &rng);

}  // namespace xlmatch

#endif  // XLMATCH_MODEL_PARAMETERS_H_
