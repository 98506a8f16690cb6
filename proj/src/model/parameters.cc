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

#include "xlmatch/model/parameters.h"

#include <cmath>

namespace xlmatch {

void Parameter::Touch(int column) {
  if (is_touched_.size() != static_cast<size_t>(value.cols())) {
    is_touched_.assign(value.cols(), 0);
  }
  if (!is_touched_[column]) {
    is_touched_[column] = 1;
    touched.push_back(column);
  }
}

void Parameter::ZeroGrad() {
  if (sparse_columns) {
    for (int column : touched) {
      grad.col(column).setZero();
      is_touched_[column] = 0;
    }
    touched.clear();
  } else {
    grad.setZero();
  }
}

ParameterStore::Id ParameterStore::Add(std::string name, int rows, int cols,
                                       bool trainable) {
  Parameter p;
  p.name = std::move(name);
  p.value = Eigen::MatrixXd::Zero(rows, cols);
  p.grad = Eigen::MatrixXd::Zero(rows, cols);
  p.trainable = trainable;
  params_.push_back(std::move(p));
  return params_.size() - 1;
}

Parameter *ParameterStore::Find(std::string_view name) {
  for (Parameter &p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Parameter *ParameterStore::Find(std::string_view name) const {
  for (const Parameter &p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void ParameterStore::ZeroGrad() {
  for (Parameter &p : params_) p.ZeroGrad();
}

void GlorotUniform(Eigen::MatrixXd &m, int fan_in, int fan_out, Rng &rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = rng.Uniform(-limit, limit);
    }
  }
}

}  // namespace xlmatch
