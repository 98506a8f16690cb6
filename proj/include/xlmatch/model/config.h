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

#ifndef XLMATCH_MODEL_CONFIG_H_
#define XLMATCH_MODEL_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

namespace xlmatch {

struct TrainingOptions {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 10;
  // Epochs without validation improvement before stopping; 0 disables.
  int patience = 3;
  uint64_t seed = 42;
};

struct ModelConfig {
  // Branches of the sentence encoder.
  bool use_conv = true;
  bool use_lstm = true;
  bool use_bilstm = true;
  std::vector<int> kernel_sizes{1, 2, 3};
  int conv_filters = 64;
  int hidden_size = 64;

  // Matching head.
  std::vector<int> mlp_hidden{64, 32};
  double dropout_rate = 0.2;
  // |r1 - r2| when true, r1 - r2 otherwise. The raw difference makes the
  // model order-dependent and exists for ablations only.
  bool absolute_difference = true;

  int max_len = 60;
  int embed_dim = 300;
  bool train_embeddings = true;

  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 10;
  int patience = 3;
  uint64_t seed = 42;

  // Width of one sentence representation:
  // |kernel_sizes| * conv_filters + hidden_size + 2 * hidden_size
  // for the enabled branches.
  int RepresentationDim() const;
  int HeadInputDim() const { return 2 * RepresentationDim(); }

  TrainingOptions training() const {
    return {learning_rate, batch_size, epochs, patience, seed};
  }

  // Throws ConfigError.
  void Validate() const;

  bool operator==(const ModelConfig &) const = default;
};

// Named presets for the encoder variants: "siamese_lstm", "siamese_conv",
// "siamese_conv_lstm" and "siamese_conv_lstm_bilstm". Only the branch
// toggles change.
ModelConfig PresetConfig(const std::string &name);

}  // namespace xlmatch

#endif  // XLMATCH_MODEL_CONFIG_H_
