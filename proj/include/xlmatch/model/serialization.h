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

#ifndef XLMATCH_MODEL_SERIALIZATION_H_
#define XLMATCH_MODEL_SERIALIZATION_H_

#include <string>

#include "xlmatch/model/matcher.h"

namespace xlmatch {

// File layout: the line "xlmatch-model 1", a line holding the byte length of
// a JSON header (config, vocabulary, fixes, training log, parameter names and
// shapes), the header itself, then every parameter as column-major
// little-endian float64 in header order.
void SaveMatcher(const Matcher &matcher, const std::string &path);

// Throws LoadError for missing, truncated or inconsistent files.
Matcher LoadMatcher(const std::string &path);

}  // namespace xlmatch

#endif  // XLMATCH_MODEL_SERIALIZATION_H_
