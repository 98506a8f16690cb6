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

#include "xlmatch/textprep.h"

#include <algorithm>

#include "xlmatch/corpus.h"
#include "xlmatch/errors.h"
#include "xlmatch/unicode.h"

namespace xlmatch {

namespace {

bool IsWordChar(char32_t c) {
  return !unicode::IsWhitespace(c) && !unicode::IsPunctuationOrSymbol(c) &&
         !unicode::IsApostrophe(c);
}

}  // namespace

TokenSequence Tokenize(std::string_view sentence) {
  TokenSequence result;
  result.original = std::string(sentence);
  const std::u32string text = unicode::Decode(unicode::FoldCase(sentence));

  std::u32string current;
  auto flush = [&]() {
    if (!current.empty()) {
      result.tokens.push_back(unicode::Encode(current));
      current.clear();
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (IsWordChar(c)) {
      current.push_back(c);
    } else if (unicode::IsApostrophe(c) && !current.empty() &&
               i + 1 < text.size() && IsWordChar(text[i + 1]) &&
               IsWordChar(text[i - 1])) {
      current.push_back(U'\'');
    } else {
      flush();
    }
  }
  flush();
  return result;
}

std::string JoinTokens(const std::vector<std::string> &tokens) {
  std::string out;
  for (const std::string &token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

const StopwordDelta &DefaultStopwordDelta() {
  static const StopwordDelta *delta = new StopwordDelta{
      {"i'm", "i'll", "i'd", "i've", "you'll", "you'd", "you've", "we'll",
       "we'd", "we've", "they'll", "they'd", "they've", "would"},
      {"re", "again"}};
  return *delta;
}

StopwordList ConsolidateStopwords(const StopwordList &base,
                                  const StopwordDelta &delta) {
  StopwordList out = base;
  for (const std::string &word : delta.additions) {
    if (delta.removals.count(word)) continue;
    if (out.words.insert(word).second) {
      out.added.insert(word);
      out.removed.erase(word);
    }
  }
  for (const std::string &word : delta.removals) {
    if (out.words.erase(word)) {
      out.removed.insert(word);
      out.added.erase(word);
    }
  }
  return out;
}

std::set<std::string> LoadWordList(const std::string &path) {
  std::set<std::string> words;
  for (const std::string &line : ReadLines(path)) {
    std::string entry = unicode::Trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    words.insert(unicode::FoldCase(entry));
  }
  return words;
}

StopwordList LoadStopwordList(const std::string &path) {
  StopwordList list;
  list.words = LoadWordList(path);
  return list;
}

const NegationSet &NegationSet::Default() {
  static const NegationSet *set = new NegationSet(
      {"no", "not", "never", "n't", "cannot", "don't", "doesn't", "didn't",
       "won't", "can't", "isn't", "aren't", "wasn't", "weren't"});
  return *set;
}

bool IsNegation(std::string_view token, const NegationSet &negations) {
  return negations.Contains(token);
}

RepairTable::RepairTable(const Vocabulary &vocab,
                         std::map<std::string, std::string> explicit_fixes)
    : vocab_(&vocab) {
  for (auto &[from, to] : explicit_fixes) {
    if (vocab.Contains(to)) {
      fixes_.emplace(from, std::move(to));
    } else {
      ++dropped_;
    }
  }
}

std::map<std::string, std::string> LoadExplicitFixes(const std::string &path) {
  std::map<std::string, std::string> fixes;
  const std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string entry = unicode::Trim(lines[i]);
    if (entry.empty() || entry[0] == '#') continue;
    size_t split = entry.find_first_of(" \t");
    if (split == std::string::npos) {
      throw ParseError(path, static_cast<int>(i) + 1,
                       "expected 'misspelled canonical'");
    }
    std::string from = unicode::FoldCase(entry.substr(0, split));
    std::string to = unicode::FoldCase(unicode::Trim(entry.substr(split + 1)));
    if (to.empty() || to.find_first_of(" \t") != std::string::npos) {
      throw ParseError(path, static_cast<int>(i) + 1,
                       "expected 'misspelled canonical'");
    }
    fixes[from] = to;
  }
  return fixes;
}

namespace {

char32_t ToggleAccent(char32_t c) {
  switch (c) {
    case U'a': return U'á';
    case U'á': return U'a';
    case U'e': return U'é';
    case U'é': return U'e';
    case U'i': return U'í';
    case U'í': return U'i';
    case U'o': return U'ó';
    case U'ó': return U'o';
    case U'u': return U'ú';
    case U'ú': return U'u';
    default: return 0;
  }
}

char32_t ToggleBv(char32_t c) {
  if (c == U'b') return U'v';
  if (c == U'v') return U'b';
  return 0;
}

// Calls visit(candidate) for every variant with exactly `edits` toggled
// positions, positions taken from `positions` in lexicographic order of
// index combinations.
template <typename Visit>
void ForEachVariant(const std::u32string &word,
                    const std::vector<size_t> &positions, int edits,
                    char32_t (*toggle)(char32_t), Visit &&visit) {
  std::vector<size_t> pick(edits);
  for (int i = 0; i < edits; ++i) pick[i] = i;
  const size_t n = positions.size();
  while (true) {
    std::u32string candidate = word;
    for (size_t p : pick) {
      candidate[positions[p]] = toggle(candidate[positions[p]]);
    }
    visit(candidate);
    int i = edits - 1;
    while (i >= 0 && pick[i] == n - edits + i) --i;
    if (i < 0) return;
    ++pick[i];
    for (int j = i + 1; j < edits; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<size_t> TogglePositions(const std::u32string &word,
                                    char32_t (*toggle)(char32_t)) {
  std::vector<size_t> positions;
  for (size_t i = 0; i < word.size(); ++i) {
    if (toggle(word[i]) != 0) positions.push_back(i);
  }
  return positions;
}

std::optional<std::string> SearchVariants(const std::u32string &word,
                                          char32_t (*toggle)(char32_t),
                                          const Vocabulary &vocab) {
  const std::vector<size_t> positions = TogglePositions(word, toggle);
  const int max_edits =
      std::min<int>(kMaxRepairEdits, static_cast<int>(positions.size()));
  for (int edits = 1; edits <= max_edits; ++edits) {
    std::optional<std::string> best;
    ForEachVariant(word, positions, edits, toggle,
                   [&](const std::u32string &candidate) {
                     std::string utf8 = unicode::Encode(candidate);
                     if (vocab.Contains(utf8) && (!best || utf8 < *best)) {
                       best = std::move(utf8);
                     }
                   });
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace

RepairResult RepairTokenDetailed(std::string_view token,
                                 const RepairTable &table) {
  const Vocabulary &vocab = table.vocabulary();
  if (vocab.Contains(token)) {
    return {std::string(token), RepairRule::kInVocabulary};
  }
  auto fix = table.explicit_fixes().find(std::string(token));
  if (fix != table.explicit_fixes().end()) {
    return {fix->second, RepairRule::kExplicit};
  }
  const std::u32string word = unicode::Decode(token);
  if (auto hit = SearchVariants(word, ToggleAccent, vocab)) {
    return {std::move(*hit), RepairRule::kAccent};
  }
  if (auto hit = SearchVariants(word, ToggleBv, vocab)) {
    return {std::move(*hit), RepairRule::kBv};
  }
  return {std::string(token), RepairRule::kUnresolved};
}

std::string RepairToken(std::string_view token, const RepairTable &table) {
  return RepairTokenDetailed(token, table).token;
}

std::vector<std::string> RepairCandidates(std::string_view token) {
  std::vector<std::string> out;
  const std::u32string word = unicode::Decode(token);
  for (auto toggle : {ToggleAccent, ToggleBv}) {
    const std::vector<size_t> positions = TogglePositions(word, toggle);
    const int max_edits =
        std::min<int>(kMaxRepairEdits, static_cast<int>(positions.size()));
    for (int edits = 1; edits <= max_edits; ++edits) {
      ForEachVariant(word, positions, edits, toggle,
                     [&](const std::u32string &candidate) {
                       out.push_back(unicode::Encode(candidate));
                     });
    }
  }
  return out;
}

}  // namespace xlmatch
