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

#ifndef XLMATCH_TEXTPREP_H_
#define XLMATCH_TEXTPREP_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xlmatch/vocabulary.h"

namespace xlmatch {

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string original;
};

// Case-folds the sentence and splits it into tokens. Whitespace, punctuation
// and symbols separate tokens, except apostrophes between two word
// characters, so "I'm" stays one token. Curly apostrophes are normalized to
// "'". Accents are preserved.
TokenSequence Tokenize(std::string_view sentence);

// Words joined with single spaces.
std::string JoinTokens(const std::vector<std::string> &tokens);

struct StopwordList {
  std::set<std::string> words;
  // Delta applied by ConsolidateStopwords, accumulated across calls.
  std::set<std::string> added;
  std::set<std::string> removed;

  bool Contains(std::string_view word) const {
    return words.find(std::string(word)) != words.end();
  }

  bool operator==(const StopwordList &) const = default;
};

struct StopwordDelta {
  std::set<std::string> additions;
  std::set<std::string> removals;
};

// The contraction family missing from common English lists (I/you/we/they
// with 'm, 'll, 'd, 've, plus "would") and the removals {"re", "again"}.
// Mirrors data/stopwords/additions.txt and data/stopwords/removals.txt.
const StopwordDelta &DefaultStopwordDelta();

// Adds delta.additions and drops delta.removals. Idempotent.
StopwordList ConsolidateStopwords(
    const StopwordList &base,
    const StopwordDelta &delta = DefaultStopwordDelta());

// One entry per line; blank lines and lines starting with '#' are skipped.
// Entries are trimmed and case-folded.
std::set<std::string> LoadWordList(const std::string &path);

StopwordList LoadStopwordList(const std::string &path);

class NegationSet {
 public:
  NegationSet() = default;
  explicit NegationSet(std::set<std::string> words) : words_(std::move(words)) {}

  // {no, not, never, n't, cannot, don't, doesn't, didn't, won't, can't,
  // isn't, aren't, wasn't, weren't}; mirrors data/negations.txt.
  static const NegationSet &Default();

  bool Contains(std::string_view token) const {
    return words_.find(std::string(token)) != words_.end();
  }
  const std::set<std::string> &words() const { return words_; }

 private:
  std::set<std::string> words_;
};

bool IsNegation(std::string_view token,
                const NegationSet &negations = NegationSet::Default());

// Misspelling -> canonical token rules plus the vocabulary used to accept
// repair candidates. Fixes whose canonical form is missing from the
// vocabulary are dropped at construction. Holds a reference to vocab, which
// must outlive the table.
class RepairTable {
 public:
  RepairTable(const Vocabulary &vocab,
              std::map<std::string, std::string> explicit_fixes = {});

  const Vocabulary &vocabulary() const { return *vocab_; }
  const std::map<std::string, std::string> &explicit_fixes() const {
    return fixes_;
  }
  size_t dropped_fixes() const { return dropped_; }

 private:
  const Vocabulary *vocab_;
  std::map<std::string, std::string> fixes_;
  size_t dropped_ = 0;
};

// "misspelled canonical" per line, separated by a tab or spaces.
std::map<std::string, std::string> LoadExplicitFixes(const std::string &path);

enum class RepairRule { kInVocabulary, kExplicit, kAccent, kBv, kUnresolved };

struct RepairResult {
  std::string token;
  RepairRule rule;
};

// Upper bound on characters changed by the accent and b/v rules.
inline constexpr int kMaxRepairEdits = 3;

// Rules are tried in order and the first hit wins: explicit fix, accent
// toggling (a/á e/é i/í o/ó u/ú), b/v swapping. Within a rule the candidate
// with the fewest changed characters is accepted, ties going to the
// lexicographically smallest. Unresolved tokens come back unchanged.
RepairResult RepairTokenDetailed(std::string_view token,
                                 const RepairTable &table);

std::string RepairToken(std::string_view token, const RepairTable &table);

// Every accent and b/v variant of token within kMaxRepairEdits changes, in
// no particular order. Used to decide which embedding rows a corpus could
// ever reach through repair.
std::vector<std::string> RepairCandidates(std::string_view token);

}  // namespace xlmatch

#endif  // XLMATCH_TEXTPREP_H_
