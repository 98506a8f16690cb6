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

#ifndef XLMATCH_TESTS_SUPPORT_TEST_SUPPORT_H_
#define XLMATCH_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xlmatch/corpus.h"
#include "xlmatch/miner.h"
#include "xlmatch/model/config.h"
#include "xlmatch/model/matcher.h"
#include "xlmatch/model/trainer.h"
#include "xlmatch/random.h"
#include "xlmatch/textprep.h"
#include "xlmatch/vocabulary.h"

namespace xlmatch::testing {

// Directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string File(const std::string &name) const;

 private:
  std::filesystem::path path_;
};

void WriteFile(const std::string &path, const std::string &contents);
std::string ReadFile(const std::string &path);

std::string DataDir();
std::string TestDataDir();

// Consolidated default stopwords from data/stopwords.
const StopwordList &DefaultStopwords();

// ---------------------------------------------------------------------------
// Random text.

// Lowercase content words that are neither stopwords nor negations.
const std::vector<std::string> &ContentWords();

std::vector<std::string> RandomWords(Rng &rng, int min_words, int max_words);
std::string Join(const std::vector<std::string> &words);

// Reference key: whitespace split, lowercase ASCII, then the stated rules.
// Only valid for space-separated lowercase ASCII input.
std::string OracleKey(const std::string &sentence, const StopwordList &stopwords,
                      const NegationSet &negations);

// ---------------------------------------------------------------------------
// Mining fixtures.

// Unlabeled records and labeled English pairs whose English sides are drawn
// from a small pool of word bags, so many keys collide. English text is
// lowercase ASCII separated by single spaces, with stopwords, digit tokens
// and negations mixed in. Some Spanish sentences repeat.
struct MiningFixture {
  Corpus unlabeled;
  Corpus labeled;
};
MiningFixture MakeMiningFixture(uint64_t seed, int unlabeled_count,
                                int labeled_count);

using LabeledKey = std::pair<SentenceKey, int>;

// All-pairs comparisons over OracleKey, with duplicates and conflicting
// labels removed.
std::set<LabeledKey> OracleStage1(const Corpus &unlabeled,
                                  const StopwordList &stopwords);
std::set<LabeledKey> OracleStage2(const Corpus &labeled, const Corpus &unlabeled,
                                  const StopwordList &stopwords);
std::set<LabeledKey> AsLabeledKeys(const std::vector<MintedPair> &pairs);

// ---------------------------------------------------------------------------
// Model fixtures.

// Vocabulary w0..w{n-1} with Gaussian-ish vectors of the given dimension.
struct ToyEmbeddings {
  Vocabulary vocab;
  Eigen::MatrixXd vectors;  // dim x vocab.rows()
};
ToyEmbeddings MakeToyEmbeddings(int words, int dim, uint64_t seed);

// max_len 4, embed_dim 3, conv_filters 2, hidden_size 2, all branches.
ModelConfig MiniConfig();

// Random sequence over the vocabulary with 1..max_len real tokens.
EncodedSequence RandomSequence(Rng &rng, const Matcher &matcher);

// Ten pairs: positives share words in different order, negatives use
// disjoint word sets.
struct ToyTask {
  ToyEmbeddings embeddings;
  LabeledPairs data;
  ModelConfig config;
};
ToyTask MakeSeparableTask(uint64_t seed);

// ---------------------------------------------------------------------------
// Gradient check.

struct GradientCheckResult {
  double max_relative_error = 0;
  std::string worst_parameter;
  int64_t checked = 0;
};

// Central differences of Matcher::Loss against ForwardBackward for every
// trainable entry except the frozen padding column. Phase::kInfer uses the
// moving batch-norm statistics; Phase::kTrain requires dropout_rate == 0.
GradientCheckResult CheckGradients(Matcher &matcher,
                                   const std::vector<EncodedPair> &batch,
                                   const std::vector<int> &labels, Phase phase,
                                   double step = 1e-6);

// Moves the matcher to a generic point for a gradient check: adds uniform
// noise in [-scale, scale] to every trainable entry except the padding
// column, and gives the batch-norm moving statistics non-trivial values.
// Freshly built models have zero biases and zero OOV vectors, which puts
// ReLU inputs exactly on their kink.
void PrepareForGradientCheck(Matcher &matcher, uint64_t seed,
                             double scale = 0.05);

// |a - n| / max(|a|, |n|, floor).
double RelativeError(double analytic, double numeric, double floor = 1e-6);

}  // namespace xlmatch::testing

#endif  // XLMATCH_TESTS_SUPPORT_TEST_SUPPORT_H_
