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

#include "xlmatch/miner.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "xlmatch/errors.h"

namespace xlmatch {
namespace {

bool IsAsciiNumber(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

bool SentenceLess(const MintedPair &a, const MintedPair &b) {
  return std::tie(a.spanish_1, a.spanish_2, a.label) <
         std::tie(b.spanish_1, b.spanish_2, b.label);
}

// Key -> indices of unlabeled records, skipping empty keys.
std::unordered_map<std::string, std::vector<size_t>> IndexByKey(
    const std::vector<UnlabeledRecord> &records, const StopwordList &stopwords,
    const NegationSet &negations, std::vector<std::string> *key_order) {
  std::unordered_map<std::string, std::vector<size_t>> index;
  for (size_t i = 0; i < records.size(); ++i) {
    NormalizedKey key =
        NormalizeKey(records[i].english_translation, stopwords, negations);
    if (key.empty()) continue;
    auto [it, inserted] = index.try_emplace(key.key);
    if (inserted && key_order != nullptr) key_order->push_back(key.key);
    it->second.push_back(i);
  }
  return index;
}

}  // namespace

NormalizedKey NormalizeKey(std::string_view sentence,
                           const StopwordList &stopwords,
                           const NegationSet &negations) {
  std::vector<std::string> kept;
  bool negated = false;
  for (std::string &token : Tokenize(sentence).tokens) {
    if (negations.Contains(token)) {
      negated = true;
    } else if (!stopwords.Contains(token) && !IsAsciiNumber(token)) {
      kept.push_back(std::move(token));
    }
  }
  if (negated) kept.emplace_back("no");
  std::sort(kept.begin(), kept.end());
  return {JoinTokens(kept), std::string(sentence)};
}

std::string_view ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kSpanishLabeled: return "spanish_labeled";
    case Provenance::kTranslationOfLabeled: return "translation_of_labeled";
    case Provenance::kStage2Expansion: return "stage2_expansion";
    case Provenance::kStage1Unlabeled: return "stage1_unlabeled";
  }
  return "unknown";
}

Provenance ParseProvenance(std::string_view name) {
  for (Provenance p :
       {Provenance::kSpanishLabeled, Provenance::kTranslationOfLabeled,
        Provenance::kStage2Expansion, Provenance::kStage1Unlabeled}) {
    if (ProvenanceName(p) == name) return p;
  }
  throw ValidationError("unknown provenance '" + std::string(name) + "'");
}

std::optional<double> RelativePrecision(int64_t recovered_true,
                                        int64_t recovered_false) {
  const int64_t total = recovered_true + recovered_false;
  if (total <= 0) return std::nullopt;
  return static_cast<double>(recovered_true) / static_cast<double>(total);
}

SentenceKey UnorderedKey(const MintedPair &pair) {
  if (pair.spanish_2 < pair.spanish_1) return {pair.spanish_2, pair.spanish_1};
  return {pair.spanish_1, pair.spanish_2};
}

std::vector<MintedPair> Deduplicate(std::vector<MintedPair> pairs,
                                    std::vector<SentenceKey> *conflicts) {
  struct Slot {
    size_t first;
    bool conflict = false;
  };
  std::map<SentenceKey, Slot> seen;
  std::vector<SentenceKey> conflict_order;
  std::vector<char> keep(pairs.size(), 0);
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].spanish_1 == pairs[i].spanish_2) continue;
    SentenceKey key = UnorderedKey(pairs[i]);
    auto [it, inserted] = seen.try_emplace(key, Slot{i});
    if (inserted) {
      keep[i] = 1;
    } else if (pairs[it->second.first].label != pairs[i].label &&
               !it->second.conflict) {
      it->second.conflict = true;
      keep[it->second.first] = 0;
      conflict_order.push_back(std::move(key));
    }
  }
  std::vector<MintedPair> out;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (keep[i]) out.push_back(std::move(pairs[i]));
  }
  if (conflicts != nullptr) {
    conflicts->insert(conflicts->end(), conflict_order.begin(),
                      conflict_order.end());
  }
  return out;
}

std::vector<MintedPair> MineStage1(const Corpus &unlabeled,
                                   const StopwordList &stopwords,
                                   const NegationSet &negations) {
  const std::vector<UnlabeledRecord> records = unlabeled.Unlabeled();
  std::vector<std::string> key_order;
  auto index = IndexByKey(records, stopwords, negations, &key_order);

  std::vector<MintedPair> minted;
  for (const std::string &key : key_order) {
    const std::vector<size_t> &group = index[key];
    for (size_t a = 0; a < group.size(); ++a) {
      for (size_t b = a + 1; b < group.size(); ++b) {
        minted.push_back({records[group[a]].spanish, records[group[b]].spanish,
                          1, Provenance::kStage1Unlabeled});
      }
    }
  }
  minted = Deduplicate(std::move(minted));
  std::sort(minted.begin(), minted.end(), SentenceLess);
  return minted;
}

std::vector<MintedPair> MineStage2(std::span<const PairRecord> labeled,
                                   const Corpus &unlabeled,
                                   const StopwordList &stopwords,
                                   const NegationSet &negations) {
  const std::vector<UnlabeledRecord> records = unlabeled.Unlabeled();
  auto index = IndexByKey(records, stopwords, negations, nullptr);

  std::vector<MintedPair> minted;
  std::vector<SentenceKey> conflicts;
  for (const PairRecord &pair : labeled) {
    const std::string *english[2] = {pair.Sentence(1, Language::kEnglish),
                                     pair.Sentence(2, Language::kEnglish)};
    const std::string *spanish[2] = {pair.Sentence(1, Language::kSpanish),
                                     pair.Sentence(2, Language::kSpanish)};
    if (!english[0] || !english[1] || !spanish[0] || !spanish[1]) continue;
    for (int side = 0; side < 2; ++side) {
      NormalizedKey key = NormalizeKey(*english[side], stopwords, negations);
      if (key.empty()) continue;
      auto it = index.find(key.key);
      if (it == index.end()) continue;
      for (size_t r : it->second) {
        MintedPair out{*spanish[0], *spanish[1], pair.label,
                       Provenance::kStage2Expansion};
        (side == 0 ? out.spanish_1 : out.spanish_2) = records[r].spanish;
        minted.push_back(std::move(out));
      }
    }
  }
  minted = Deduplicate(std::move(minted), &conflicts);
  if (!conflicts.empty()) {
    spdlog::warn("stage 2: dropped {} pairs minted with both labels",
                 conflicts.size());
  }
  std::sort(minted.begin(), minted.end(), SentenceLess);
  return minted;
}

std::vector<MintedPair> MineStage2(const Corpus &labeled,
                                   const Corpus &unlabeled,
                                   const StopwordList &stopwords,
                                   const NegationSet &negations) {
  const std::vector<PairRecord> pairs = labeled.Pairs();
  return MineStage2(std::span<const PairRecord>(pairs), unlabeled, stopwords,
                    negations);
}

MiningReport AuditRelativePrecision(const Corpus &labeled,
                                    const StopwordList &stopwords,
                                    const NegationSet &negations) {
  MiningReport report;
  for (const PairRecord &pair : labeled.Pairs()) {
    const std::string *e1 = pair.Sentence(1, Language::kEnglish);
    const std::string *e2 = pair.Sentence(2, Language::kEnglish);
    if (e1 == nullptr || e2 == nullptr) continue;
    NormalizedKey k1 = NormalizeKey(*e1, stopwords, negations);
    if (k1.empty()) continue;
    NormalizedKey k2 = NormalizeKey(*e2, stopwords, negations);
    if (k1.key != k2.key) continue;
    if (pair.label == 1) {
      ++report.recovered_true;
    } else {
      ++report.recovered_false;
    }
  }
  report.relative_precision =
      RelativePrecision(report.recovered_true, report.recovered_false);
  return report;
}

TrainingSet BuildTrainingSet(const Corpus &labeled_en, const Corpus &labeled_es,
                             const Corpus &unlabeled,
                             const StopwordList &stopwords,
                             const BuildOptions &options) {
  std::vector<MintedPair> all;
  auto append = [&all](const Corpus &corpus, Provenance provenance) {
    for (const SentencePair &pair : SpanishPairs(corpus)) {
      all.push_back({pair.first, pair.second, *pair.label, provenance});
    }
  };
  if (options.include_spanish_train) {
    append(labeled_es, Provenance::kSpanishLabeled);
  }
  append(labeled_en, Provenance::kTranslationOfLabeled);

  std::vector<PairRecord> seeds = labeled_en.Pairs();
  if (options.include_spanish_train) {
    for (PairRecord &r : labeled_es.Pairs()) seeds.push_back(std::move(r));
  }
  std::vector<MintedPair> stage2 = MineStage2(
      std::span<const PairRecord>(seeds), unlabeled, stopwords,
      options.negations);
  all.insert(all.end(), stage2.begin(), stage2.end());
  std::vector<MintedPair> stage1 =
      MineStage1(unlabeled, stopwords, options.negations);
  all.insert(all.end(), stage1.begin(), stage1.end());

  TrainingSet result;
  result.pairs = Deduplicate(std::move(all), &result.conflicts);
  for (const SentenceKey &conflict : result.conflicts) {
    spdlog::warn("dropping pair with conflicting labels: '{}' / '{}'",
                 conflict.first, conflict.second);
  }

  MiningReport &report = result.report;
  report.conflicts_dropped = static_cast<int64_t>(result.conflicts.size());
  for (const MintedPair &pair : result.pairs) {
    ++report.total_minted;
    ++(pair.label == 1 ? report.minted_positive : report.minted_negative);
    ++report.per_provenance[pair.provenance];
  }
  return result;
}

void WriteMintedPairs(std::span<const MintedPair> pairs,
                      const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::string stem = FileStem(path);
  size_t n = 0;
  for (const MintedPair &pair : pairs) {
    out << stem << ':' << ++n << '\t' << SanitizeField(pair.spanish_1) << '\t'
        << SanitizeField(pair.spanish_2) << '\t' << pair.label << '\t'
        << ProvenanceName(pair.provenance) << '\n';
  }
  out.flush();
  if (!out) throw IoError("error writing " + path);
}

std::vector<MintedPair> ReadMintedPairs(const std::string &path) {
  const std::vector<std::string> lines = ReadLines(path);
  std::vector<MintedPair> out;
  out.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    std::vector<std::string> fields = SplitTabs(lines[i]);
    if (fields.size() != 5) {
      throw ParseError(path, line,
                       "expected 5 tab-separated columns, found " +
                           std::to_string(fields.size()));
    }
    MintedPair pair;
    pair.spanish_1 = fields[1];
    pair.spanish_2 = fields[2];
    if (fields[3] != "0" && fields[3] != "1") {
      throw ParseError(path, line, "label must be 0 or 1");
    }
    pair.label = fields[3] == "1";
    try {
      pair.provenance = ParseProvenance(fields[4]);
    } catch (const ValidationError &e) {
      throw ParseError(path, line, e.what());
    }
    out.push_back(std::move(pair));
  }
  return out;
}

void WriteMiningReport(const MiningReport &report, const std::string &path) {
  nlohmann::ordered_json json;
  json["recovered_true"] = report.recovered_true;
  json["recovered_false"] = report.recovered_false;
  json["relative_precision"] =
      report.relative_precision ? nlohmann::ordered_json(*report.relative_precision)
                                : nlohmann::ordered_json(nullptr);
  json["total_minted"] = report.total_minted;
  json["minted_positive"] = report.minted_positive;
  json["minted_negative"] = report.minted_negative;
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
  for (const auto &[p, count] : report.per_provenance) {
    provenance[std::string(ProvenanceName(p))] = count;
  }
  json["per_provenance"] = provenance;
  json["conflicts_dropped"] = report.conflicts_dropped;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << json.dump(2) << '\n';
  if (!out) throw IoError("error writing " + path);
}

}  // namespace xlmatch
