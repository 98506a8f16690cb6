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

#include <gtest/gtest.h>

#include "test_support.h"
#include "xlmatch/errors.h"
#include "xlmatch/unicode.h"

namespace xlmatch {
namespace {

using ::xlmatch::testing::ReadFile;
using ::xlmatch::testing::TempDir;
using ::xlmatch::testing::WriteFile;

TEST(ParsePairFileTest, EnglishFieldMapping) {
  TempDir dir;
  WriteFile(dir.File("en.tsv"), "Q1e\tQ1s\tQ2e\tQ2s\t1\n");
  const std::vector<PairRecord> pairs =
      ParsePairFile(dir.File("en.tsv"), Language::kEnglish).Pairs();
  ASSERT_EQ(pairs.size(), 1u);
  const PairRecord &r = pairs[0];
  EXPECT_EQ(r.id, "en:1");
  EXPECT_EQ(r.q1_src, "Q1e");
  EXPECT_EQ(r.q1_trans, "Q1s");
  EXPECT_EQ(r.q2_src, "Q2e");
  EXPECT_EQ(r.q2_trans, "Q2s");
  EXPECT_EQ(r.label, 1);
  EXPECT_EQ(*r.Sentence(1, Language::kSpanish), "Q1s");
  EXPECT_EQ(*r.Sentence(2, Language::kEnglish), "Q2e");
}

TEST(ParsePairFileTest, SpanishLayout) {
  TempDir dir;
  WriteFile(dir.File("es.tsv"), "S1\tE1\tS2\t\t0\n");
  const PairRecord r =
      ParsePairFile(dir.File("es.tsv"), Language::kSpanish).Pairs().at(0);
  EXPECT_EQ(*r.Sentence(1, Language::kSpanish), "S1");
  EXPECT_EQ(*r.Sentence(1, Language::kEnglish), "E1");
  EXPECT_EQ(r.Sentence(2, Language::kEnglish), nullptr);
  EXPECT_EQ(r.label, 0);
}

TEST(ParsePairFileTest, WrongColumnCountNamesLine) {
  TempDir dir;
  WriteFile(dir.File("bad.tsv"), "a\tb\tc\td\t1\na\tb\tc\td\n");
  try {
    ParsePairFile(dir.File("bad.tsv"), Language::kEnglish);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ParsePairFileTest, LabelMustBeBinary) {
  TempDir dir;
  for (const char *label : {"2", "-1", "1.0", "", "yes"}) {
    WriteFile(dir.File("l.tsv"), std::string("a\tb\tc\td\t") + label + "\n");
    EXPECT_THROW(ParsePairFile(dir.File("l.tsv"), Language::kEnglish),
                 ValidationError)
        << label;
  }
}

TEST(ParsePairFileTest, EmptySourceSentenceRejected) {
  TempDir dir;
  WriteFile(dir.File("e.tsv"), "  \tb\tc\td\t1\n");
  EXPECT_THROW(ParsePairFile(dir.File("e.tsv"), Language::kEnglish),
               ValidationError);
}

TEST(ParsePairFileTest, HeaderAndLineEndings) {
  TempDir dir;
  WriteFile(dir.File("h.tsv"), "q1\tt1\tq2\tt2\tlabel\r\na\tb\tc\td\t1\r\n");
  EXPECT_THROW(ParsePairFile(dir.File("h.tsv"), Language::kEnglish),
               ValidationError);
  const Corpus c = ParsePairFile(dir.File("h.tsv"), Language::kEnglish, {true});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.Pairs()[0].id, "h:2");
  EXPECT_EQ(c.Pairs()[0].label, 1);
}

TEST(ParsePairFileTest, RecordCountEqualsLineCount) {
  TempDir dir;
  std::string text;
  for (int i = 0; i < 250; ++i) text += "a\tb\tc\td\t" + std::to_string(i % 2) + "\n";
  WriteFile(dir.File("n.tsv"), text);
  EXPECT_EQ(ParsePairFile(dir.File("n.tsv"), Language::kEnglish).size(), 250u);
}

TEST(ParsePairFileTest, MissingFileIsIoError) {
  EXPECT_THROW(ParsePairFile("/nonexistent/x.tsv", Language::kEnglish), IoError);
}

TEST(ParseUnlabeledFileTest, OneRecord) {
  TempDir dir;
  WriteFile(dir.File("u.tsv"), "¿Dónde está mi pedido?\tWhere is my order?\n");
  const std::vector<UnlabeledRecord> records =
      ParseUnlabeledFile(dir.File("u.tsv")).Unlabeled();
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].spanish, "¿Dónde está mi pedido?");
  EXPECT_EQ(records[0].english_translation, "Where is my order?");
}

TEST(ParseUnlabeledFileTest, BlankLineAndEmptyField) {
  TempDir dir;
  WriteFile(dir.File("u.tsv"), "a\tb\n\nc\td\n");
  try {
    ParseUnlabeledFile(dir.File("u.tsv"));
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
  }
  WriteFile(dir.File("v.tsv"), "a\t \n");
  EXPECT_THROW(ParseUnlabeledFile(dir.File("v.tsv")), ValidationError);
}

Corpus SampleCorpus(const std::string &stem, Language lang) {
  std::vector<Record> records;
  records.push_back(PairRecord{stem + ":1", "uno", "one", "dos", "two", 1, lang});
  records.push_back(
      PairRecord{stem + ":2", "¿tres?", std::nullopt, "cuatro", "four", 0, lang});
  records.push_back(PairRecord{stem + ":3", "cinco", "five", "seis", std::nullopt, 1, lang});
  return Corpus(std::move(records), stem + ".tsv");
}

TEST(WritePairFileTest, RoundTrip) {
  TempDir dir;
  for (Language lang : {Language::kEnglish, Language::kSpanish}) {
    const Corpus c = SampleCorpus("rt", lang);
    WritePairFile(c, dir.File("rt.tsv"));
    EXPECT_EQ(ParsePairFile(dir.File("rt.tsv"), lang).Pairs(), c.Pairs());
  }
}

TEST(WritePairFileTest, RoundTripProperty) {
  TempDir dir;
  Rng rng(5);
  const std::u32string alphabet = U"abcñé ?¿!.,'0";
  auto sentence = [&]() {
    std::u32string s = U"x";
    const int n = static_cast<int>(rng.Below(15));
    for (int i = 0; i < n; ++i) s += alphabet[rng.Below(alphabet.size())];
    s += U"y";
    return unicode::Encode(s);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const Language lang = rng.Below(2) ? Language::kEnglish : Language::kSpanish;
    std::vector<Record> records;
    const int n = 1 + static_cast<int>(rng.Below(20));
    for (int i = 1; i <= n; ++i) {
      PairRecord r;
      r.id = "p:" + std::to_string(i);
      r.q1_src = sentence();
      if (rng.Below(3)) r.q1_trans = sentence();
      r.q2_src = sentence();
      if (rng.Below(3)) r.q2_trans = sentence();
      r.label = static_cast<int>(rng.Below(2));
      r.lang = lang;
      records.push_back(r);
    }
    const Corpus c(records, "p.tsv");
    WritePairFile(c, dir.File("p.tsv"));
    ASSERT_EQ(ParsePairFile(dir.File("p.tsv"), lang).Pairs(), c.Pairs());
  }
}

TEST(WritePairFileTest, EmbeddedTabsBecomeSpaces) {
  TempDir dir;
  std::vector<Record> records;
  records.push_back(PairRecord{"t:1", "a\tb", "c", "d\ne", "f", 1, Language::kEnglish});
  WritePairFile(Corpus(records, "t.tsv"), dir.File("t.tsv"));
  EXPECT_EQ(ReadFile(dir.File("t.tsv")), "a b\tc\td e\tf\t1\n");
  const PairRecord back = ParsePairFile(dir.File("t.tsv"), Language::kEnglish).Pairs()[0];
  EXPECT_EQ(back.q1_src, "a b");
  EXPECT_EQ(back.q2_src, "d e");
}

TEST(WritePairFileTest, Errors) {
  TempDir dir;
  std::vector<Record> records;
  records.push_back(UnlabeledRecord{"u:1", "hola", "hello"});
  EXPECT_THROW(WritePairFile(Corpus(records, "u.tsv"), dir.File("u.tsv")), TypeError);
  EXPECT_THROW(WritePairFile(SampleCorpus("x", Language::kEnglish),
                             dir.File("missing/dir/x.tsv")),
               IoError);
}

TEST(CorpusTest, IdsMustBeUnique) {
  std::vector<Record> records;
  records.push_back(UnlabeledRecord{"a", "hola", "hello"});
  records.push_back(UnlabeledRecord{"a", "adiós", "bye"});
  EXPECT_THROW(Corpus(records, "dup"), ValidationError);
}

TEST(CorpusTest, TypedViews) {
  const Corpus c = SampleCorpus("s", Language::kEnglish);
  EXPECT_EQ(c.Pairs().size(), 3u);
  EXPECT_THROW(c.Unlabeled(), TypeError);
}

TEST(LoadSentencePairsTest, Formats) {
  TempDir dir;
  WriteFile(dir.File("m.tsv"), "m:1\tuno\tdos\t1\tstage1_unlabeled\nm:2\ttres\tcuatro\t0\n");
  const auto minted = LoadSentencePairs(dir.File("m.tsv"), PairFormat::kMinted);
  ASSERT_EQ(minted.size(), 2u);
  EXPECT_EQ(minted[0], (SentencePair{"m:1", "uno", "dos", 1}));
  EXPECT_EQ(minted[1].label, 0);

  WriteFile(dir.File("test.tsv"), "uno\tdos\n");
  const auto test = LoadSentencePairs(dir.File("test.tsv"), PairFormat::kTest);
  EXPECT_EQ(test.at(0), (SentencePair{"test:1", "uno", "dos", std::nullopt}));

  WriteFile(dir.File("en.tsv"), "one\tuno\ttwo\tdos\t1\n");
  EXPECT_EQ(LoadSentencePairs(dir.File("en.tsv"), PairFormat::kEnglishTrain).at(0),
            (SentencePair{"en:1", "uno", "dos", 1}));
  WriteFile(dir.File("es.tsv"), "uno\tone\tdos\ttwo\t0\n");
  EXPECT_EQ(LoadSentencePairs(dir.File("es.tsv"), PairFormat::kSpanishTrain).at(0),
            (SentencePair{"es:1", "uno", "dos", 0}));

  WriteFile(dir.File("dup.tsv"), "d\ta\tb\t1\nd\tc\td\t0\n");
  EXPECT_THROW(LoadSentencePairs(dir.File("dup.tsv"), PairFormat::kMinted),
               ValidationError);
  EXPECT_THROW(ParsePairFormat("csv"), ArgumentError);
}

TEST(CorpusHelpersTest, FileStem) {
  EXPECT_EQ(FileStem("/a/b/train_es.tsv"), "train_es");
  EXPECT_EQ(FileStem("plain"), "plain");
}

}  // namespace
}  // namespace xlmatch
