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

#include "xlmatch/corpus.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "xlmatch/errors.h"
#include "xlmatch/unicode.h"

namespace xlmatch {
namespace {

int ParseLabel(const std::string &path, int line, std::string_view text) {
  std::string value = unicode::Trim(text);
  if (value == "0") return 0;
  if (value == "1") return 1;
  throw ParseError(path, line, "label must be 0 or 1, got '" + value + "'");
}

std::string RequiredField(const std::string &path, int line,
                          std::string_view text, const char *name) {
  std::string value = unicode::Trim(text);
  if (value.empty()) {
    throw ParseError(path, line, std::string("empty ") + name);
  }
  return value;
}

std::optional<std::string> OptionalField(std::string_view text) {
  std::string value = unicode::Trim(text);
  if (value.empty()) return std::nullopt;
  return value;
}

std::string MakeId(const std::string &stem, int line) {
  return stem + ":" + std::to_string(line);
}

void ExpectColumns(const std::string &path, int line,
                   const std::vector<std::string> &fields, size_t expected) {
  if (fields.size() != expected) {
    throw ParseError(path, line,
                     "expected " + std::to_string(expected) +
                         " tab-separated columns, found " +
                         std::to_string(fields.size()));
  }
}

}  // namespace

std::string_view LanguageName(Language lang) {
  return lang == Language::kEnglish ? "english" : "spanish";
}

const std::string *PairRecord::Sentence(int side, Language language) const {
  const std::string &src = side == 1 ? q1_src : q2_src;
  const std::optional<std::string> &trans = side == 1 ? q1_trans : q2_trans;
  if (language == lang) return &src;
  return trans ? &*trans : nullptr;
}

Corpus::Corpus(std::vector<Record> records, std::string source_file)
    : records_(std::move(records)), source_file_(std::move(source_file)) {
  std::unordered_set<std::string> seen;
  for (const Record &record : records_) {
    const std::string &id =
        std::visit([](const auto &r) -> const std::string & { return r.id; },
                   record);
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate record id '" + id + "' in corpus " +
                            source_file_);
    }
  }
}

std::vector<PairRecord> Corpus::Pairs() const {
  std::vector<PairRecord> out;
  out.reserve(records_.size());
  for (const Record &record : records_) {
    const auto *pair = std::get_if<PairRecord>(&record);
    if (pair == nullptr) {
      throw TypeError("corpus " + source_file_ +
                      " contains unlabeled records where pairs are required");
    }
    out.push_back(*pair);
  }
  return out;
}

std::vector<UnlabeledRecord> Corpus::Unlabeled() const {
  std::vector<UnlabeledRecord> out;
  out.reserve(records_.size());
  for (const Record &record : records_) {
    const auto *item = std::get_if<UnlabeledRecord>(&record);
    if (item == nullptr) {
      throw TypeError("corpus " + source_file_ +
                      " contains pair records where unlabeled are required");
    }
    out.push_back(*item);
  }
  return out;
}

std::string FileStem(const std::string &path) {
  return std::filesystem::path(path).stem().string();
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  std::string content = buffer.str();
  if (content.rfind("\xEF\xBB\xBF", 0) == 0) content.erase(0, 3);

  std::vector<std::string> lines;
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string SanitizeField(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

Corpus ParsePairFile(const std::string &path, Language lang,
                     const ParseOptions &options) {
  const std::vector<std::string> lines = ReadLines(path);
  const std::string stem = FileStem(path);
  std::vector<Record> records;
  records.reserve(lines.size());
  for (size_t i = options.skip_header ? 1 : 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    std::vector<std::string> fields = SplitTabs(lines[i]);
    ExpectColumns(path, line, fields, 5);
    PairRecord record;
    record.id = MakeId(stem, line);
    record.lang = lang;
    record.q1_src = RequiredField(path, line, fields[0], "question 1");
    record.q1_trans = OptionalField(fields[1]);
    record.q2_src = RequiredField(path, line, fields[2], "question 2");
    record.q2_trans = OptionalField(fields[3]);
    record.label = ParseLabel(path, line, fields[4]);
    records.emplace_back(std::move(record));
  }
  return Corpus(std::move(records), path);
}

Corpus ParseUnlabeledFile(const std::string &path,
                          const ParseOptions &options) {
  const std::vector<std::string> lines = ReadLines(path);
  const std::string stem = FileStem(path);
  std::vector<Record> records;
  records.reserve(lines.size());
  for (size_t i = options.skip_header ? 1 : 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    std::vector<std::string> fields = SplitTabs(lines[i]);
    if (fields.size() == 1 && unicode::Trim(fields[0]).empty()) {
      throw ParseError(path, line, "blank line");
    }
    ExpectColumns(path, line, fields, 2);
    UnlabeledRecord record;
    record.id = MakeId(stem, line);
    record.spanish = RequiredField(path, line, fields[0], "spanish question");
    record.english_translation =
        RequiredField(path, line, fields[1], "english translation");
    records.emplace_back(std::move(record));
  }
  return Corpus(std::move(records), path);
}

void WritePairFile(const Corpus &corpus, const std::string &path) {
  const std::vector<PairRecord> pairs = corpus.Pairs();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const PairRecord &r : pairs) {
    out << SanitizeField(r.q1_src) << '\t'
        << SanitizeField(r.q1_trans.value_or("")) << '\t'
        << SanitizeField(r.q2_src) << '\t'
        << SanitizeField(r.q2_trans.value_or("")) << '\t' << r.label << '\n';
  }
  out.flush();
  if (!out) throw IoError("error writing " + path);
}

PairFormat ParsePairFormat(std::string_view name) {
  if (name == "minted") return PairFormat::kMinted;
  if (name == "english-train") return PairFormat::kEnglishTrain;
  if (name == "spanish-train") return PairFormat::kSpanishTrain;
  if (name == "test") return PairFormat::kTest;
  throw ArgumentError("unknown pair format '" + std::string(name) +
                      "' (expected minted, english-train, spanish-train or "
                      "test)");
}

std::vector<SentencePair> SpanishPairs(const Corpus &corpus) {
  std::vector<SentencePair> out;
  for (const PairRecord &r : corpus.Pairs()) {
    const std::string *first = r.Sentence(1, Language::kSpanish);
    const std::string *second = r.Sentence(2, Language::kSpanish);
    if (first == nullptr || second == nullptr) continue;
    out.push_back({r.id, *first, *second, r.label});
  }
  return out;
}

std::vector<SentencePair> LoadSentencePairs(const std::string &path,
                                            PairFormat format,
                                            const ParseOptions &options) {
  switch (format) {
    case PairFormat::kEnglishTrain:
      return SpanishPairs(ParsePairFile(path, Language::kEnglish, options));
    case PairFormat::kSpanishTrain:
      return SpanishPairs(ParsePairFile(path, Language::kSpanish, options));
    case PairFormat::kMinted:
    case PairFormat::kTest:
      break;
  }

  const std::vector<std::string> lines = ReadLines(path);
  const std::string stem = FileStem(path);
  std::vector<SentencePair> out;
  std::unordered_set<std::string> seen;
  for (size_t i = options.skip_header ? 1 : 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    std::vector<std::string> fields = SplitTabs(lines[i]);
    SentencePair pair;
    if (format == PairFormat::kTest) {
      ExpectColumns(path, line, fields, 2);
      pair.id = MakeId(stem, line);
      pair.first = RequiredField(path, line, fields[0], "question 1");
      pair.second = RequiredField(path, line, fields[1], "question 2");
    } else {
      if (fields.size() != 4) ExpectColumns(path, line, fields, 5);
      pair.id = RequiredField(path, line, fields[0], "pair id");
      pair.first = RequiredField(path, line, fields[1], "question 1");
      pair.second = RequiredField(path, line, fields[2], "question 2");
      pair.label = ParseLabel(path, line, fields[3]);
    }
    if (!seen.insert(pair.id).second) {
      throw ParseError(path, line, "duplicate pair id '" + pair.id + "'");
    }
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace xlmatch
