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

#ifndef XLMATCH_UNICODE_H_
#define XLMATCH_UNICODE_H_

#include <string>
#include <string_view>

namespace xlmatch::unicode {

// Decodes UTF-8. Ill-formed sequences become U+FFFD.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view text);

// Full Unicode case folding (e.g. "É" -> "é", "ß" -> "ss").
std::string FoldCase(std::string_view utf8);

bool IsWhitespace(char32_t c);

// General categories P* and S*, plus control characters.
bool IsPunctuationOrSymbol(char32_t c);

bool IsApostrophe(char32_t c);

// Trims Unicode whitespace at both ends.
std::string Trim(std::string_view utf8);

}  // namespace xlmatch::unicode

#endif  // XLMATCH_UNICODE_H_
