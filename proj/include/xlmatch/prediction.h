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

#ifndef XLMATCH_PREDICTION_H_
#define XLMATCH_PREDICTION_H_

#include <string>

namespace xlmatch {

struct PredictionRecord {
  std::string pair_id;
  // Match probability in [0, 1].
  double probability = 0.0;

  bool operator==(const PredictionRecord &) const = default;
};

}  // namespace xlmatch

#endif  // XLMATCH_PREDICTION_H_
