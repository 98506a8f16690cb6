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

#ifndef XLMATCH_EMBEDDINGS_H_
#define XLMATCH_EMBEDDINGS_H_

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "xlmatch/corpus.h"
#include "xlmatch/textprep.h"
#include "xlmatch/vocabulary.h"

namespace xlmatch {

// Word vectors in fastText text format. vectors holds one column per row of
// the vocabulary, including the padding and OOV rows, both all-zero.
struct EmbeddingTable {
  int dim = 0;
  Vocabulary vocab;
  Eigen::MatrixXd vectors;

  int pad_index() const { return vocab.pad_index(); }
  int oov_index() const { return vocab.oov_index(); }
  int rows() const { return vocab.rows(); }
  Eigen::VectorXd Row(int index) const { return vectors.col(index); }
};

// Reads "token v1 ... vd" lines with an optional leading "count dim" header.
// When keep is given only those tokens are loaded; the dimension is still
// validated on every line. Throws FormatError naming the offending line.
EmbeddingTable LoadEmbeddingTable(
    const std::string &path,
    const std::unordered_set<std::string> *keep = nullptr);

// Tokens of the given sentences, their repair candidates and the explicit
// fix targets: every vocabulary entry encoding these sentences can touch.
std::unordered_set<std::string> ReachableTokens(
    std::span<const std::string> sentences,
    const std::map<std::string, std::string> &explicit_fixes = {});

struct EncodedSequence {
  std::vector<int> indices;
  int true_length = 0;

  bool operator==(const EncodedSequence &) const = default;
};

// Repairs each token against the vocabulary; tokens that stay unknown map to
// the OOV row. Keeps the first max_len tokens and pads the tail.
EncodedSequence EncodeSequence(const TokenSequence &tokens,
                               const Vocabulary &vocab,
                               const RepairTable &repair, int max_len);
EncodedSequence EncodeSequence(const TokenSequence &tokens,
                               const EmbeddingTable &table,
                               const RepairTable &repair, int max_len);

struct OovStats {
  int64_t sentences = 0;
  int64_t pairs = 0;
  // Tokens per sentence; absent for an empty corpus. std is the population
  // standard deviation.
  std::optional<int64_t> max_tokens;
  std::optional<double> mean_tokens;
  std::optional<double> std_tokens;
  int64_t oov_terms = 0;
  int64_t oov_sentences = 0;
  // Absent for corpora without pairs.
  std::optional<int64_t> oov_pairs;
};

// Statistics over the Spanish sentences of a corpus, tokenized but not
// repaired.
OovStats ComputeOovStats(const Corpus &corpus, const Vocabulary &vocab);
OovStats ComputeOovStats(std::span<const SentencePair> pairs,
                         const Vocabulary &vocab);
inline OovStats ComputeOovStats(const Corpus &corpus,
                                const EmbeddingTable &table) {
  return ComputeOovStats(corpus, table.vocab);
}

// Spanish sentences of a corpus in record order.
std::vector<std::string> SpanishSentences(const Corpus &corpus);

void WriteOovStats(const OovStats &stats, const std::string &dataset,
                   const std::string &path);

}  // namespace xlmatch

#endif  // XLMATCH_EMBEDDINGS_H_
