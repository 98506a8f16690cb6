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

#include "xlmatch/model/layers.h"

#include <algorithm>
#include <cmath>

namespace xlmatch {
namespace {

Eigen::ArrayXd Sigmoid(const Eigen::ArrayXd &x) {
  return 1.0 / (1.0 + (-x).exp());
}

}  // namespace

// ConvMaxPool

ConvMaxPool::ConvMaxPool(ParameterStore &store, const std::string &prefix,
                         int kernel, int filters, int input_dim, Rng &rng)
    : kernel_(kernel), filters_(filters), input_dim_(input_dim) {
  weight_ = store.Add(prefix + "/kernel", filters, kernel * input_dim);
  bias_ = store.Add(prefix + "/bias", filters, 1);
  GlorotUniform(store[weight_].value, kernel * input_dim, kernel * filters,
                rng);
}

Eigen::VectorXd ConvMaxPool::Forward(const ParameterStore &store,
                                     const Eigen::MatrixXd &x, int length,
                                     Cache *cache) const {
  Cache local;
  Cache &c = cache != nullptr ? *cache : local;
  const int max_len = static_cast<int>(x.cols());
  const int width = kernel_ * input_dim_;
  const int windows = std::max(1, std::min(length, max_len - kernel_ + 1));

  c.windows.resize(width, windows);
  for (int s = 0; s < windows; ++s) {
    c.windows.col(s) = Eigen::Map<const Eigen::VectorXd>(x.col(s).data(), width);
  }
  Eigen::MatrixXd z = store[weight_].value * c.windows;
  z.colwise() += store[bias_].value.col(0);

  c.argmax.assign(filters_, 0);
  c.pooled.resize(filters_);
  for (int f = 0; f < filters_; ++f) {
    Eigen::Index best;
    c.pooled(f) = z.row(f).maxCoeff(&best);
    c.argmax[f] = static_cast<int>(best);
  }
  return c.pooled.cwiseMax(0.0);
}

void ConvMaxPool::Backward(ParameterStore &store, const Cache &cache,
                           const Eigen::VectorXd &dout,
                           Eigen::MatrixXd *dx) const {
  Parameter &weight = store[weight_];
  Parameter &bias = store[bias_];
  const int width = kernel_ * input_dim_;
  for (int f = 0; f < filters_; ++f) {
    if (cache.pooled(f) <= 0.0) continue;
    const double g = dout(f);
    const int s = cache.argmax[f];
    weight.grad.row(f) += g * cache.windows.col(s).transpose();
    bias.grad(f, 0) += g;
    if (dx != nullptr) {
      Eigen::Map<Eigen::VectorXd>(dx->col(s).data(), width) +=
          g * weight.value.row(f).transpose();
    }
  }
}

// Lstm

Lstm::Lstm(ParameterStore &store, const std::string &prefix, int input_dim,
           int hidden, bool reverse, Rng &rng)
    : hidden_(hidden), reverse_(reverse) {
  kernel_ = store.Add(prefix + "/kernel", 4 * hidden, input_dim);
  recurrent_ = store.Add(prefix + "/recurrent_kernel", 4 * hidden, hidden);
  bias_ = store.Add(prefix + "/bias", 4 * hidden, 1);
  GlorotUniform(store[kernel_].value, input_dim, 4 * hidden, rng);
  GlorotUniform(store[recurrent_].value, hidden, 4 * hidden, rng);
  store[bias_].value.block(hidden, 0, hidden, 1).setOnes();
}

Eigen::VectorXd Lstm::Forward(const ParameterStore &store,
                              const Eigen::MatrixXd &x, int length,
                              Cache *cache) const {
  Cache local;
  Cache &c = cache != nullptr ? *cache : local;
  const int h = hidden_;
  const int n = length;
  c.length = n;
  if (n == 0) return Eigen::VectorXd::Zero(h);

  c.inputs.resize(x.rows(), n);
  for (int s = 0; s < n; ++s) c.inputs.col(s) = x.col(reverse_ ? n - 1 - s : s);
  Eigen::MatrixXd pre = store[kernel_].value * c.inputs;
  pre.colwise() += store[bias_].value.col(0);

  const Eigen::MatrixXd &recurrent = store[recurrent_].value;
  c.gates.resize(4 * h, n);
  c.cells.resize(h, n);
  c.hidden.resize(h, n);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd cell = Eigen::VectorXd::Zero(h);
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd a = pre.col(s);
    if (s > 0) a.noalias() += recurrent * state;
    const Eigen::ArrayXd i = Sigmoid(a.segment(0, h).array());
    const Eigen::ArrayXd f = Sigmoid(a.segment(h, h).array());
    const Eigen::ArrayXd g = a.segment(2 * h, h).array().tanh();
    const Eigen::ArrayXd o = Sigmoid(a.segment(3 * h, h).array());
    cell = (f * cell.array() + i * g).matrix();
    state = (o * cell.array().tanh()).matrix();
    c.gates.col(s) << i.matrix(), f.matrix(), g.matrix(), o.matrix();
    c.cells.col(s) = cell;
    c.hidden.col(s) = state;
  }
  return state;
}

void Lstm::Backward(ParameterStore &store, const Cache &cache,
                    const Eigen::VectorXd &dout, Eigen::MatrixXd *dx) const {
  const int h = hidden_;
  const int n = cache.length;
  if (n == 0) return;
  Parameter &kernel = store[kernel_];
  Parameter &recurrent = store[recurrent_];
  Parameter &bias = store[bias_];

  Eigen::MatrixXd dpre(4 * h, n);
  Eigen::ArrayXd dh = dout.array();
  Eigen::ArrayXd dc = Eigen::ArrayXd::Zero(h);
  for (int s = n - 1; s >= 0; --s) {
    const Eigen::ArrayXd i = cache.gates.col(s).segment(0, h).array();
    const Eigen::ArrayXd f = cache.gates.col(s).segment(h, h).array();
    const Eigen::ArrayXd g = cache.gates.col(s).segment(2 * h, h).array();
    const Eigen::ArrayXd o = cache.gates.col(s).segment(3 * h, h).array();
    const Eigen::ArrayXd tc = cache.cells.col(s).array().tanh();
    Eigen::ArrayXd c_prev = Eigen::ArrayXd::Zero(h);
    if (s > 0) c_prev = cache.cells.col(s - 1).array();

    dc += dh * o * (1.0 - tc.square());
    dpre.col(s) << (dc * g * i * (1.0 - i)).matrix(),
        (dc * c_prev * f * (1.0 - f)).matrix(),
        (dc * i * (1.0 - g.square())).matrix(),
        (dh * tc * o * (1.0 - o)).matrix();
    dc *= f;
    dh = (recurrent.value.transpose() * dpre.col(s)).array();
  }

  kernel.grad.noalias() += dpre * cache.inputs.transpose();
  bias.grad.col(0) += dpre.rowwise().sum();
  if (n > 1) {
    recurrent.grad.noalias() +=
        dpre.rightCols(n - 1) * cache.hidden.leftCols(n - 1).transpose();
  }
  if (dx != nullptr) {
    const Eigen::MatrixXd dinputs = kernel.value.transpose() * dpre;
    for (int s = 0; s < n; ++s) {
      dx->col(reverse_ ? n - 1 - s : s) += dinputs.col(s);
    }
  }
}

// MlpHead

MlpHead::MlpHead(ParameterStore &store, int input_dim,
                 const std::vector<int> &hidden, double dropout_rate, Rng &rng)
    : dropout_rate_(dropout_rate) {
  int in = input_dim;
  for (size_t l = 0; l < hidden.size(); ++l) {
    const int out = hidden[l];
    const std::string dense = "dense_" + std::to_string(l + 1);
    const std::string norm = "batch_norm_" + std::to_string(l + 1);
    Layer layer;
    layer.kernel = store.Add(dense + "/kernel", out, in);
    layer.bias = store.Add(dense + "/bias", out, 1);
    layer.gamma = store.Add(norm + "/gamma", out, 1);
    layer.beta = store.Add(norm + "/beta", out, 1);
    layer.moving_mean = store.Add(norm + "/moving_mean", out, 1, false);
    layer.moving_var = store.Add(norm + "/moving_variance", out, 1, false);
    GlorotUniform(store[layer.kernel].value, in, out, rng);
    store[layer.gamma].value.setOnes();
    store[layer.moving_var].value.setOnes();
    layers_.push_back(layer);
    in = out;
  }
  out_kernel_ = store.Add("output/kernel", 1, in);
  out_bias_ = store.Add("output/bias", 1, 1);
  GlorotUniform(store[out_kernel_].value, in, 1, rng);
}

Eigen::RowVectorXd MlpHead::Forward(const ParameterStore &store,
                                    const Eigen::MatrixXd &x, Phase phase,
                                    Rng *rng, Cache *cache) const {
  Cache local;
  Cache &c = cache != nullptr ? *cache : local;
  c.phase = phase;
  c.layers.resize(layers_.size());
  const double batch = static_cast<double>(x.cols());

  Eigen::MatrixXd activations = x;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const Layer &layer = layers_[l];
    LayerCache &lc = c.layers[l];
    lc.input = std::move(activations);
    Eigen::MatrixXd z = store[layer.kernel].value * lc.input;
    z.colwise() += store[layer.bias].value.col(0);

    Eigen::VectorXd mean;
    Eigen::VectorXd var;
    if (phase == Phase::kTrain) {
      mean = z.rowwise().mean();
      var = (z.colwise() - mean).array().square().rowwise().sum() / batch;
      lc.batch_mean = mean;
      lc.batch_var = var;
    } else {
      mean = store[layer.moving_mean].value.col(0);
      var = store[layer.moving_var].value.col(0);
    }
    lc.inv_std = (var.array() + kBatchNormEpsilon).rsqrt().matrix();
    lc.normalized =
        ((z.colwise() - mean).array().colwise() * lc.inv_std.array()).matrix();
    lc.activated =
        ((lc.normalized.array().colwise() *
          store[layer.gamma].value.col(0).array())
             .colwise() +
         store[layer.beta].value.col(0).array())
            .matrix();
    activations = lc.activated.cwiseMax(0.0);

    if (phase == Phase::kTrain && dropout_rate_ > 0.0 && rng != nullptr) {
      const double keep_scale = 1.0 / (1.0 - dropout_rate_);
      lc.mask.resize(activations.rows(), activations.cols());
      for (Eigen::Index j = 0; j < lc.mask.cols(); ++j) {
        for (Eigen::Index i = 0; i < lc.mask.rows(); ++i) {
          lc.mask(i, j) = rng->Uniform() >= dropout_rate_ ? keep_scale : 0.0;
        }
      }
      activations = activations.cwiseProduct(lc.mask);
    } else {
      lc.mask.resize(0, 0);
    }
  }
  c.last = std::move(activations);
  Eigen::RowVectorXd logits = store[out_kernel_].value * c.last;
  logits.array() += store[out_bias_].value(0, 0);
  return logits;
}

Eigen::MatrixXd MlpHead::Backward(ParameterStore &store, const Cache &cache,
                                  const Eigen::RowVectorXd &dlogits) const {
  Parameter &out_kernel = store[out_kernel_];
  out_kernel.grad.noalias() += dlogits * cache.last.transpose();
  store[out_bias_].grad(0, 0) += dlogits.sum();
  Eigen::MatrixXd dactivations = out_kernel.value.transpose() * dlogits;

  for (size_t l = layers_.size(); l-- > 0;) {
    const Layer &layer = layers_[l];
    const LayerCache &lc = cache.layers[l];
    if (lc.mask.size() > 0) dactivations = dactivations.cwiseProduct(lc.mask);
    const Eigen::ArrayXXd dy =
        dactivations.array() * (lc.activated.array() > 0.0).cast<double>();

    const Eigen::ArrayXd gamma = store[layer.gamma].value.col(0).array();
    store[layer.gamma].grad.col(0) +=
        (dy * lc.normalized.array()).rowwise().sum().matrix();
    store[layer.beta].grad.col(0) += dy.rowwise().sum().matrix();

    const Eigen::ArrayXXd dnorm = dy.colwise() * gamma;
    Eigen::MatrixXd dz;
    if (cache.phase == Phase::kTrain) {
      const double batch = static_cast<double>(dnorm.cols());
      const Eigen::ArrayXd sum_dnorm = dnorm.rowwise().sum();
      const Eigen::ArrayXd sum_dnorm_x =
          (dnorm * lc.normalized.array()).rowwise().sum();
      dz = (((batch * dnorm).colwise() - sum_dnorm -
             lc.normalized.array().colwise() * sum_dnorm_x)
                .colwise() *
            (lc.inv_std.array() / batch))
               .matrix();
    } else {
      dz = (dnorm.colwise() * lc.inv_std.array()).matrix();
    }

    Parameter &kernel = store[layer.kernel];
    kernel.grad.noalias() += dz * lc.input.transpose();
    store[layer.bias].grad.col(0) += dz.rowwise().sum();
    dactivations = kernel.value.transpose() * dz;
  }
  return dactivations;
}

void MlpHead::UpdateMovingStatistics(ParameterStore &store,
                                     const Cache &cache) const {
  if (cache.phase != Phase::kTrain) return;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const LayerCache &lc = cache.layers[l];
    Parameter &mean = store[layers_[l].moving_mean];
    Parameter &var = store[layers_[l].moving_var];
    mean.value.col(0) = kBatchNormMomentum * mean.value.col(0) +
                        (1.0 - kBatchNormMomentum) * lc.batch_mean;
    var.value.col(0) = kBatchNormMomentum * var.value.col(0) +
                       (1.0 - kBatchNormMomentum) * lc.batch_var;
  }
}

}  // namespace xlmatch
