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

#include "xlmatch/embeddings.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "xlmatch/errors.h"

namespace xlmatch {
namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool ParseInt(std::string_view text, long *value) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

double ParseDouble(const std::string &path, int line, std::string_view text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw FormatError(path, line,
                      "invalid vector component '" + std::string(text) + "'");
  }
  return value;
}

// One unit per pair (two sentences) or per unlabeled record (one sentence).
using Unit = std::vector<std::string>;

OovStats StatsOverUnits(const std::vector<Unit> &units, bool paired,
                        const Vocabulary &vocab) {
  OovStats stats;
  std::set<std::string> oov_terms;
  std::vector<int64_t> lengths;
  int64_t oov_pairs = 0;
  for (const Unit &unit : units) {
    bool unit_has_oov = false;
    for (const std::string &sentence : unit) {
      const TokenSequence tokens = Tokenize(sentence);
      lengths.push_back(static_cast<int64_t>(tokens.tokens.size()));
      bool sentence_has_oov = false;
      for (const std::string &token : tokens.tokens) {
        if (!vocab.Contains(token)) {
          oov_terms.insert(token);
          sentence_has_oov = true;
        }
      }
      if (sentence_has_oov) {
        ++stats.oov_sentences;
        unit_has_oov = true;
      }
    }
    if (unit_has_oov) ++oov_pairs;
  }
  stats.sentences = static_cast<int64_t>(lengths.size());
  stats.pairs = paired ? static_cast<int64_t>(units.size()) : 0;
  stats.oov_terms = static_cast<int64_t>(oov_terms.size());
  if (paired) stats.oov_pairs = oov_pairs;
  if (!lengths.empty()) {
    int64_t max = 0;
    double sum = 0;
    for (int64_t n : lengths) {
      max = std::max(max, n);
      sum += static_cast<double>(n);
    }
    const double mean = sum / static_cast<double>(lengths.size());
    double squares = 0;
    for (int64_t n : lengths) {
      const double d = static_cast<double>(n) - mean;
      squares += d * d;
    }
    stats.max_tokens = max;
    stats.mean_tokens = mean;
    stats.std_tokens = std::sqrt(squares / static_cast<double>(lengths.size()));
  }
  return stats;
}

}  // namespace

EmbeddingTable LoadEmbeddingTable(const std::string &path,
                                  const std::unordered_set<std::string> *keep) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");

  EmbeddingTable table;
  std::vector<double> values;
  std::string line;
  int line_number = 0;
  long declared_count = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::vector<std::string_view> fields = SplitSpaces(line);
    if (fields.empty()) continue;

    if (line_number == 1 && fields.size() == 2) {
      long count = 0;
      long dim = 0;
      if (ParseInt(fields[0], &count) && ParseInt(fields[1], &dim)) {
        if (dim <= 0) throw FormatError(path, line_number, "non-positive dimension");
        declared_count = count;
        table.dim = static_cast<int>(dim);
        continue;
      }
    }
    if (table.dim == 0) {
      if (fields.size() < 2) {
        throw FormatError(path, line_number, "line has no vector components");
      }
      table.dim = static_cast<int>(fields.size()) - 1;
    }
    if (static_cast<int>(fields.size()) - 1 != table.dim) {
      throw FormatError(path, line_number,
                        "expected " + std::to_string(table.dim) +
                            " components, found " +
                            std::to_string(fields.size() - 1));
    }
    std::string token(fields[0]);
    if (keep != nullptr && keep->find(token) == keep->end()) continue;
    if (table.vocab.Contains(token)) continue;
    table.vocab.Add(std::move(token));
    for (size_t i = 1; i < fields.size(); ++i) {
      values.push_back(ParseDouble(path, line_number, fields[i]));
    }
  }
  if (in.bad()) throw IoError("error reading " + path);
  if (table.dim == 0) throw FormatError(path, line_number, "no vectors found");
  if (declared_count >= 0 && keep == nullptr &&
      declared_count != table.vocab.size()) {
    spdlog::warn("{}: header declares {} vectors, read {}", path,
                 declared_count, table.vocab.size());
  }

  table.vectors = Eigen::MatrixXd::Zero(table.dim, table.vocab.rows());
  if (!values.empty()) {
    table.vectors.leftCols(table.vocab.size()) =
        Eigen::Map<const Eigen::MatrixXd>(values.data(), table.dim,
                                          table.vocab.size());
  }
  return table;
}

std::unordered_set<std::string> ReachableTokens(
    std::span<const std::string> sentences,
    const std::map<std::string, std::string> &explicit_fixes) {
  std::unordered_set<std::string> reachable;
  std::unordered_set<std::string> expanded;
  for (const auto &[from, to] : explicit_fixes) reachable.insert(to);
  for (const std::string &sentence : sentences) {
    for (const std::string &token : Tokenize(sentence).tokens) {
      if (!expanded.insert(token).second) continue;
      reachable.insert(token);
      for (std::string &candidate : RepairCandidates(token)) {
        reachable.insert(std::move(candidate));
      }
    }
  }
  return reachable;
}

EncodedSequence EncodeSequence(const TokenSequence &tokens,
                               const Vocabulary &vocab,
                               const RepairTable &repair, int max_len) {
  if (max_len < 1) throw ArgumentError("max_len must be at least 1");
  EncodedSequence out;
  out.indices.assign(max_len, vocab.pad_index());
  const int n = std::min<int>(max_len, static_cast<int>(tokens.tokens.size()));
  for (int i = 0; i < n; ++i) {
    const std::string repaired = RepairToken(tokens.tokens[i], repair);
    out.indices[i] = vocab.Find(repaired).value_or(vocab.oov_index());
  }
  out.true_length = n;
  return out;
}

EncodedSequence EncodeSequence(const TokenSequence &tokens,
                               const EmbeddingTable &table,
                               const RepairTable &repair, int max_len) {
  return EncodeSequence(tokens, table.vocab, repair, max_len);
}

std::vector<std::string> SpanishSentences(const Corpus &corpus) {
  std::vector<std::string> out;
  for (const Record &record : corpus.records()) {
    if (const auto *pair = std::get_if<PairRecord>(&record)) {
      for (int side : {1, 2}) {
        if (const std::string *s = pair->Sentence(side, Language::kSpanish)) {
          out.push_back(*s);
        }
      }
    } else {
      out.push_back(std::get<UnlabeledRecord>(record).spanish);
    }
  }
  return out;
}

OovStats ComputeOovStats(const Corpus &corpus, const Vocabulary &vocab) {
  std::vector<Unit> units;
  bool paired = false;
  for (const Record &record : corpus.records()) {
    if (const auto *pair = std::get_if<PairRecord>(&record)) {
      paired = true;
      Unit unit;
      for (int side : {1, 2}) {
        if (const std::string *s = pair->Sentence(side, Language::kSpanish)) {
          unit.push_back(*s);
        }
      }
      units.push_back(std::move(unit));
    } else {
      units.push_back({std::get<UnlabeledRecord>(record).spanish});
    }
  }
  return StatsOverUnits(units, paired, vocab);
}

OovStats ComputeOovStats(std::span<const SentencePair> pairs,
                         const Vocabulary &vocab) {
  std::vector<Unit> units;
  units.reserve(pairs.size());
  for (const SentencePair &pair : pairs) {
    units.push_back({pair.first, pair.second});
  }
  return StatsOverUnits(units, true, vocab);
}

void WriteOovStats(const OovStats &stats, const std::string &dataset,
                   const std::string &path) {
  using Json = nlohmann::ordered_json;
  auto optional = [](const auto &value) {
    return value ? Json(*value) : Json(nullptr);
  };
  Json json;
  json["dataset"] = dataset;
  json["sentences"] = stats.sentences;
  json["pairs"] = stats.pairs;
  json["max_tokens"] = optional(stats.max_tokens);
  json["mean_tokens"] = optional(stats.mean_tokens);
  json["std_tokens"] = optional(stats.std_tokens);
  json["oov_terms"] = stats.oov_terms;
  json["oov_sentences"] = stats.oov_sentences;
  json["oov_pairs"] = optional(stats.oov_pairs);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << json.dump(2) << '\n';
  if (!out) throw IoError("error writing " + path);
}

}  // namespace xlmatch
