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

#ifndef XLMATCH_MINER_H_
#define XLMATCH_MINER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xlmatch/corpus.h"
#include "xlmatch/textprep.h"

namespace xlmatch {

// Order-free hash of an English sentence: the sorted multiset of its
// content tokens, with every negation collapsed into a single "no".
struct NormalizedKey {
  std::string key;
  std::string source_sentence;

  bool empty() const { return key.empty(); }
};

// Tokenizes, drops stopwords and all-ASCII-digit tokens, maps negations to
// one "no" marker, sorts and joins with spaces. Negations are recognized
// before stopword removal, so "not" survives as "no" even when it is a
// stopword.
NormalizedKey NormalizeKey(std::string_view sentence,
                           const StopwordList &stopwords,
                           const NegationSet &negations = NegationSet::Default());

enum class Provenance {
  kSpanishLabeled,        // native Spanish ground truth
  kTranslationOfLabeled,  // Spanish translations of English ground truth
  kStage2Expansion,
  kStage1Unlabeled,
};

std::string_view ProvenanceName(Provenance provenance);
Provenance ParseProvenance(std::string_view name);

struct MintedPair {
  std::string spanish_1;
  std::string spanish_2;
  int label = 0;
  Provenance provenance = Provenance::kStage1Unlabeled;

  bool operator==(const MintedPair &) const = default;
};

struct MiningReport {
  int64_t recovered_true = 0;
  int64_t recovered_false = 0;
  // Absent when nothing was recovered.
  std::optional<double> relative_precision;
  int64_t total_minted = 0;
  int64_t minted_positive = 0;
  int64_t minted_negative = 0;
  std::map<Provenance, int64_t> per_provenance;
  int64_t conflicts_dropped = 0;
};

// recovered_true / (recovered_true + recovered_false), absent for 0/0.
std::optional<double> RelativePrecision(int64_t recovered_true,
                                        int64_t recovered_false);

// Unordered pair of distinct Spanish sentences, smaller one first.
using SentenceKey = std::pair<std::string, std::string>;
SentenceKey UnorderedKey(const MintedPair &pair);

// Removes pairs of identical sentences, keeps the first occurrence of every
// unordered sentence pair and drops pairs seen with both labels entirely.
// Dropped conflicts are appended to *conflicts when given.
std::vector<MintedPair> Deduplicate(std::vector<MintedPair> pairs,
                                    std::vector<SentenceKey> *conflicts = nullptr);

// Every unordered pair of distinct Spanish sentences whose English
// translations share a non-empty key, labeled 1. Sorted by sentences.
std::vector<MintedPair> MineStage1(const Corpus &unlabeled,
                                   const StopwordList &stopwords,
                                   const NegationSet &negations =
                                       NegationSet::Default());

// For each labeled pair and side, every unlabeled record whose English key
// equals that side's English key yields a pair with the record's Spanish
// sentence substituted on that side and the original label. Labeled records
// without English and Spanish text on both sides are skipped. Sorted by
// sentences.
std::vector<MintedPair> MineStage2(std::span<const PairRecord> labeled,
                                   const Corpus &unlabeled,
                                   const StopwordList &stopwords,
                                   const NegationSet &negations =
                                       NegationSet::Default());

std::vector<MintedPair> MineStage2(const Corpus &labeled,
                                   const Corpus &unlabeled,
                                   const StopwordList &stopwords,
                                   const NegationSet &negations =
                                       NegationSet::Default());

// Treats "both English sides hash to the same non-empty key" as a predicted
// match and counts how often the ground truth agrees.
MiningReport AuditRelativePrecision(const Corpus &labeled,
                                    const StopwordList &stopwords,
                                    const NegationSet &negations =
                                        NegationSet::Default());

struct BuildOptions {
  // Leave out the native Spanish pairs, e.g. to keep them for validation.
  // They are then also not used as stage-2 seeds.
  bool include_spanish_train = true;
  NegationSet negations = NegationSet::Default();
};

struct TrainingSet {
  std::vector<MintedPair> pairs;
  MiningReport report;
  std::vector<SentenceKey> conflicts;
};

// Union of native Spanish pairs, translated English pairs, stage-2 and
// stage-1 output, deduplicated in that precedence order. Pairs carrying
// both labels are dropped and logged. The report's recovered_* fields are
// left at zero; see AuditRelativePrecision.
TrainingSet BuildTrainingSet(const Corpus &labeled_en, const Corpus &labeled_es,
                             const Corpus &unlabeled,
                             const StopwordList &stopwords,
                             const BuildOptions &options = {});

// Five columns: id, spanish 1, spanish 2, label, provenance. Ids are
// "<file stem>:<n>" with n counting from 1.
void WriteMintedPairs(std::span<const MintedPair> pairs,
                      const std::string &path);
std::vector<MintedPair> ReadMintedPairs(const std::string &path);

void WriteMiningReport(const MiningReport &report, const std::string &path);

}  // namespace xlmatch

#endif  // XLMATCH_MINER_H_
