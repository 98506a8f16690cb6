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

#include "xlmatch/model/config.h"

#include <cmath>

#include "xlmatch/errors.h"

namespace xlmatch {

int ModelConfig::RepresentationDim() const {
  int dim = 0;
  if (use_conv) dim += static_cast<int>(kernel_sizes.size()) * conv_filters;
  if (use_lstm) dim += hidden_size;
  if (use_bilstm) dim += 2 * hidden_size;
  return dim;
}

void ModelConfig::Validate() const {
  auto fail = [](const std::string &what) {
    throw ConfigError("invalid model config: " + what);
  };
  if (!use_conv && !use_lstm && !use_bilstm) {
    fail("at least one of use_conv, use_lstm, use_bilstm must be set");
  }
  if (use_conv) {
    if (kernel_sizes.empty()) fail("kernel_sizes is empty");
    for (int k : kernel_sizes) {
      if (k < 1) fail("kernel sizes must be positive");
      if (k > max_len) fail("kernel size exceeds max_len");
    }
    if (conv_filters < 1) fail("conv_filters must be positive");
  }
  if ((use_lstm || use_bilstm) && hidden_size < 1) {
    fail("hidden_size must be positive");
  }
  if (mlp_hidden.size() != 2) fail("mlp_hidden must list two layer widths");
  for (int width : mlp_hidden) {
    if (width < 1) fail("mlp_hidden widths must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    fail("dropout_rate must lie in [0, 1)");
  }
  if (max_len < 1) fail("max_len must be positive");
  if (embed_dim < 1) fail("embed_dim must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be positive");
  }
  if (batch_size < 1) fail("batch_size must be at least 1");
  if (epochs < 1) fail("epochs must be at least 1");
  if (patience < 0) fail("patience must be non-negative");
}

ModelConfig PresetConfig(const std::string &name) {
  ModelConfig config;
  if (name == "siamese_lstm") {
    config.use_conv = false;
    config.use_bilstm = false;
    config.hidden_size = 32;
  } else if (name == "siamese_conv") {
    config.use_lstm = false;
    config.use_bilstm = false;
  } else if (name == "siamese_conv_lstm") {
    config.use_bilstm = false;
  } else if (name != "siamese_conv_lstm_bilstm") {
    throw ConfigError("unknown model preset '" + name + "'");
  }
  return config;
}

}  // namespace xlmatch
