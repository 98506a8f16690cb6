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

#ifndef XLMATCH_VOCABULARY_H_
#define XLMATCH_VOCABULARY_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xlmatch {

// Token <-> row index map. Two reserved rows follow the words: padding at
// size() and out-of-vocabulary at size() + 1.
class Vocabulary {
 public:
  // Returns the index of token, inserting it if new.
  int Add(std::string token);

  std::optional<int> Find(std::string_view token) const;
  bool Contains(std::string_view token) const { return Find(token).has_value(); }

  const std::string &token(int index) const { return tokens_.at(index); }
  const std::vector<std::string> &tokens() const { return tokens_; }
  int size() const { return static_cast<int>(tokens_.size()); }

  int pad_index() const { return size(); }
  int oov_index() const { return size() + 1; }
  int rows() const { return size() + 2; }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int, Hash, std::equal_to<>> index_;
};

}  // namespace xlmatch

#endif  // XLMATCH_VOCABULARY_H_
