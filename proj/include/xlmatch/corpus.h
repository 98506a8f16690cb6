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

#ifndef XLMATCH_CORPUS_H_
#define XLMATCH_CORPUS_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xlmatch {

enum class Language { kEnglish, kSpanish };

std::string_view LanguageName(Language lang);

// One labeled question pair. "src" is the file's own language and "trans"
// the provided translation, so for an English file q1_src is English and
// q1_trans Spanish, and the other way round for a Spanish file.
struct PairRecord {
  std::string id;
  std::string q1_src;
  std::optional<std::string> q1_trans;
  std::string q2_src;
  std::optional<std::string> q2_trans;
  int label = 0;
  Language lang = Language::kEnglish;

  // side is 1 or 2. Returns nullptr when the record has no sentence in that
  // language on that side.
  const std::string *Sentence(int side, Language language) const;

  bool operator==(const PairRecord &) const = default;
};

struct UnlabeledRecord {
  std::string id;
  std::string spanish;
  std::string english_translation;

  bool operator==(const UnlabeledRecord &) const = default;
};

using Record = std::variant<PairRecord, UnlabeledRecord>;

// An ordered, immutable list of records read from one file. Record ids are
// unique; the constructor enforces it.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Record> records, std::string source_file);

  const std::vector<Record> &records() const { return records_; }
  const std::string &source_file() const { return source_file_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Typed views. Throw TypeError if any record has the other type.
  std::vector<PairRecord> Pairs() const;
  std::vector<UnlabeledRecord> Unlabeled() const;

 private:
  std::vector<Record> records_;
  std::string source_file_;
};

struct ParseOptions {
  // The competition files carry no header row; set this for files that do.
  bool skip_header = false;
};

// Five tab-separated columns: question 1, its translation, question 2, its
// translation, label. Ids are "<file stem>:<1-based line number>".
Corpus ParsePairFile(const std::string &path, Language lang,
                     const ParseOptions &options = {});

// Two tab-separated columns: Spanish question, English translation.
Corpus ParseUnlabeledFile(const std::string &path,
                          const ParseOptions &options = {});

// Writes PairRecords in the five-column layout. Tabs and line breaks inside
// sentences are replaced by a single space, so text containing them does not
// survive a round trip unchanged. Throws TypeError on UnlabeledRecords and
// IoError when the path cannot be written.
void WritePairFile(const Corpus &corpus, const std::string &path);

// A pair of sentences in the modelling language, as consumed by the matcher,
// the baseline and the evaluator.
struct SentencePair {
  std::string id;
  std::string first;
  std::string second;
  std::optional<int> label;

  bool operator==(const SentencePair &) const = default;
};

enum class PairFormat {
  kMinted,        // id, spanish 1, spanish 2, label[, provenance]
  kEnglishTrain,  // five-column English file; the Spanish translations are used
  kSpanishTrain,  // five-column Spanish file; the Spanish originals are used
  kTest,          // spanish 1, spanish 2
};

// Accepts "minted", "english-train", "spanish-train" and "test".
PairFormat ParsePairFormat(std::string_view name);

std::vector<SentencePair> LoadSentencePairs(const std::string &path,
                                            PairFormat format,
                                            const ParseOptions &options = {});

// Spanish side of every labeled pair. Pairs without a Spanish sentence on
// either side are skipped.
std::vector<SentencePair> SpanishPairs(const Corpus &corpus);

// File name without directory and extension.
std::string FileStem(const std::string &path);

// Splits file content into lines: strips a UTF-8 BOM, carriage returns and
// the empty string after a trailing newline.
std::vector<std::string> ReadLines(const std::string &path);

std::vector<std::string> SplitTabs(std::string_view line);

// Replaces tabs and line breaks with single spaces.
std::string SanitizeField(std::string_view text);

}  // namespace xlmatch

#endif  // XLMATCH_CORPUS_H_
