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

#include "xlmatch/vocabulary.h"

namespace xlmatch {

int Vocabulary::Add(std::string token) {
  auto it = index_.find(std::string_view(token));
  if (it != index_.end()) return it->second;
  const int index = size();
  tokens_.push_back(token);
  index_.emplace(std::move(token), index);
  return index;
}

std::optional<int> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace xlmatch
