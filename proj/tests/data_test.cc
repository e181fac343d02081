// Copyright (c) 2026 The Unifront Authors
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


#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "unifront/bucketing.h"
#include "unifront/corpus.h"
#include "unifront/embedding.h"
#include "unifront/lexicon.h"
#include "unifront/synthetic.h"
#include "unifront/text_util.h"

namespace unifront {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("unifront_data_test_" + name)).string();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

Lexicon SmallLexicon() {
  Lexicon lex;
  lex.Add("中", {{"zhong", 1}, {"zhong", 4}});
  lex.Add("国", {{"guo", 2}});
  lex.Add("人", {{"ren", 2}});
  return lex;
}

TEST(CorpusTest, ParsesToneMarkedSyllables) {
  Utterance u = ParseCorpusRecord(
      R"({"text":"中国","cws":"B E","syl":"zhong1 guo2","pros":"0 3"})", SmallLexicon());
  EXPECT_EQ(u.phonemes, (std::vector<std::string>{"zhong", "guo"}));
  EXPECT_EQ(u.tones, (std::vector<int>{1, 2}));
  EXPECT_FALSE(u.has_pos());
}

TEST(CorpusTest, ParsesSeparateToneField) {
  Utterance u = ParseCorpusRecord(
      R"({"text":"中国","cws":"B E","pos":"ns ns","syl":"zhong guo","tone":"1 2","pros":"0 3"})",
      SmallLexicon());
  EXPECT_EQ(u.phonemes, (std::vector<std::string>{"zhong", "guo"}));
  EXPECT_EQ(u.tones, (std::vector<int>{1, 2}));
  EXPECT_EQ(u.polyphone_mask, (std::vector<bool>{true, false}));
}

TEST(CorpusTest, RejectsUtteranceNotEndingInIp) {
  try {
    ParseCorpusRecord(R"({"text":"国","cws":"S","syl":"guo","tone":"2","pros":"0"})",
                      SmallLexicon());
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("last prosody label must be IP"), std::string::npos);
  }
}

TEST(CorpusTest, LengthMismatchNamesField) {
  try {
    ParseCorpusRecord(R"({"text":"中国","cws":"B E","syl":"zhong","tone":"1 2","pros":"0 3"})",
                      SmallLexicon());
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("syl"), std::string::npos) << e.what();
  }
}

TEST(CorpusTest, UnknownCharacterGetsFalseMask) {
  CorpusStats stats;
  Utterance u = ParseCorpusRecord(
      R"({"text":"人马","cws":"B E","syl":"ren ma","tone":"2 3","pros":"0 3"})",
      SmallLexicon(), &stats);
  EXPECT_EQ(u.polyphone_mask, (std::vector<bool>{false, false}));
  EXPECT_EQ(stats.unknown_chars, 1u);
}

TEST(CorpusTest, MalformedRecordReportsLine) {
  const std::string path = TempPath("bad.jsonl");
  WriteFile(path,
            "{\"text\":\"国\",\"cws\":\"S\",\"syl\":\"guo\",\"tone\":\"2\",\"pros\":\"3\"}\n"
            "{not json\n");
  try {
    ReadCorpus(path, SmallLexicon());
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  std::remove(path.c_str());
}

TEST(CorpusTest, WriteReadRoundTrip) {
  const Lexicon lex = MakeSyntheticLexicon();
  const auto utts = GenerateSyntheticCorpus(25, 11, lex);
  const std::string path = TempPath("roundtrip.jsonl");
  WriteCorpus(path, utts);
  EXPECT_EQ(ReadCorpus(path, lex), utts);
  std::remove(path.c_str());
}

TEST(CorpusTest, EncodeDecodeIsIdentity) {
  const Lexicon lex = MakeSyntheticLexicon();
  const auto utts = GenerateSyntheticCorpus(40, 5, lex);
  const VocabSet vocab = BuildVocab(lex, utts, 10);
  for (const auto& u : utts) EXPECT_EQ(Decode(Encode(u, vocab), vocab), u);
}

TEST(PolyphoneMaskTest, Examples) {
  Lexicon lex;
  lex.Add("的", {{"de", 5}, {"di", 4}});
  lex.Add("地", {{"de", 5}, {"di", 4}});
  lex.Add("得", {{"de", 2}, {"dei", 3}});
  lex.Add("北", {{"bei", 3}});
  lex.Add("京", {{"jing", 1}});
  lex.Add("行", {{"xing", 2}, {"hang", 2}});
  lex.Add("人", {{"ren", 2}});
  EXPECT_EQ(BuildPolyphoneMask(SplitUtf8("的地得"), lex), (std::vector<bool>{true, true, true}));
  EXPECT_EQ(BuildPolyphoneMask(SplitUtf8("北京"), lex), (std::vector<bool>{false, false}));
  EXPECT_EQ(BuildPolyphoneMask(SplitUtf8("行人"), lex), (std::vector<bool>{true, false}));
  EXPECT_EQ(BuildPolyphoneMask(SplitUtf8("行人"), lex), BuildPolyphoneMask(SplitUtf8("行人"), lex));
}

// Every segmentation of n characters into words, as BMES.
void Segmentations(int n, std::vector<CwsTag>* prefix, std::set<std::vector<CwsTag>>* out) {
  const int done = static_cast<int>(prefix->size());
  if (done == n) {
    out->insert(*prefix);
    return;
  }
  for (int len = 1; done + len <= n; ++len) {
    for (int k = 0; k < len; ++k) {
      prefix->push_back(len == 1 ? CwsTag::kS
                        : k == 0 ? CwsTag::kB
                        : k + 1 == len ? CwsTag::kE
                                       : CwsTag::kM);
    }
    Segmentations(n, prefix, out);
    prefix->resize(done);
  }
}

TEST(BmesTest, ValidityMatchesSegmentationOracle) {
  for (int n = 1; n <= 6; ++n) {
    std::set<std::vector<CwsTag>> valid;
    std::vector<CwsTag> prefix;
    Segmentations(n, &prefix, &valid);
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    for (int code = 0; code < total; ++code) {
      std::vector<CwsTag> seq;
      for (int i = 0, c = code; i < n; ++i, c /= 4) seq.push_back(static_cast<CwsTag>(c % 4));
      EXPECT_EQ(IsValidBmes(seq), valid.count(seq) > 0) << "n=" << n << " code=" << code;
    }
  }
}

TEST(BucketingTest, BoundsEndAtUpperBound) {
  const auto bounds = BucketBounds(11, 200);
  ASSERT_EQ(bounds.size(), 11u);
  EXPECT_EQ(bounds.back(), 200);
  EXPECT_TRUE(std::is_sorted(bounds.begin(), bounds.end()));
  EXPECT_EQ(std::adjacent_find(bounds.begin(), bounds.end()), bounds.end());
  EXPECT_EQ(BucketBounds(13, 90).back(), 90);
}

TEST(BucketingTest, DropsOverlongUtterances) {
  const std::vector<int> lengths = {10, 95, 40};
  BucketPlan plan = BucketBatches(lengths, 13, 90, 4, 1);
  EXPECT_EQ(plan.dropped, 1u);
  EXPECT_EQ(plan.placed, 2u);
  for (const auto& b : plan.batches) {
    for (size_t m : b.members) EXPECT_NE(m, 1u);
  }
}

TEST(BucketingTest, DeterministicConservingAndBucketPure) {
  const auto utts = GenerateSyntheticCorpus(100, 3, MakeSyntheticLexicon());
  std::vector<int> lengths;
  for (const auto& u : utts) lengths.push_back(static_cast<int>(u.size()));
  BucketPlan a = BucketBatches(lengths, 2, 20, 8, 42);
  BucketPlan b = BucketBatches(lengths, 2, 20, 8, 42);
  ASSERT_EQ(a.batches.size(), b.batches.size());
  for (size_t i = 0; i < a.batches.size(); ++i) EXPECT_EQ(a.batches[i].members, b.batches[i].members);
  EXPECT_EQ(a.placed + a.dropped, lengths.size());
  size_t seen = 0;
  for (const auto& batch : a.batches) {
    EXPECT_LE(batch.members.size(), 8u);
    const int hi = a.upper_bounds[batch.bucket];
    const int lo = batch.bucket == 0 ? 0 : a.upper_bounds[batch.bucket - 1];
    for (size_t m : batch.members) {
      EXPECT_GT(lengths[m], lo);
      EXPECT_LE(lengths[m], hi);
    }
    seen += batch.members.size();
  }
  EXPECT_EQ(seen, a.placed);
}

TEST(BucketingTest, RejectsBadArguments) {
  const std::vector<int> lengths = {3};
  EXPECT_THROW(BucketBatches(lengths, 2, 20, 0, 1), std::invalid_argument);
  EXPECT_THROW(BucketBounds(5, 3), std::invalid_argument);
  EXPECT_THROW(BucketBounds(0, 3), std::invalid_argument);
}

TEST(EmbeddingTest, LoadsWord2VecTextAndAveragesUnk) {
  const std::string path = TempPath("emb.txt");
  WriteFile(path, "2 3\n中 1 2 3\n国 3 4 5\n");
  EmbeddingTable t = EmbeddingTable::Load(path, 3);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dim(), 3);
  // Mean of (1,2,3) and (3,4,5).
  EXPECT_EQ(t.Lookup("人"), Eigen::Vector3d(2, 3, 4));
  EXPECT_EQ(t.Lookup("国"), Eigen::Vector3d(3, 4, 5));
  std::remove(path.c_str());
}

TEST(EmbeddingTest, RejectsDimensionMismatch) {
  const std::string path = TempPath("emb4.txt");
  WriteFile(path, "2 4\n中 1 2 3 4\n国 3 4 5 6\n");
  EXPECT_THROW(EmbeddingTable::Load(path, 3), std::runtime_error);
  std::remove(path.c_str());
}

TEST(EmbeddingTest, DuplicateKeepsLastVector) {
  const std::string path = TempPath("dup.txt");
  WriteFile(path, "2 2\n中 1 1\n中 5 7\n");
  EmbeddingTable t = EmbeddingTable::Load(path, 2);
  EXPECT_EQ(t.Lookup("中"), Eigen::Vector2d(5, 7));
  std::remove(path.c_str());
}

TEST(SyntheticTest, DeterministicUnderSeed) {
  const Lexicon lex = MakeSyntheticLexicon();
  const auto a = GenerateSyntheticCorpus(1, 7, lex);
  const auto b = GenerateSyntheticCorpus(1, 7, lex);
  EXPECT_EQ(FormatCorpusRecord(a[0]), FormatCorpusRecord(b[0]));
  EXPECT_NE(FormatCorpusRecord(GenerateSyntheticCorpus(1, 8, lex)[0]), FormatCorpusRecord(a[0]));
}

TEST(SyntheticTest, RejectsBadInput) {
  EXPECT_THROW(GenerateSyntheticCorpus(0, 1, MakeSyntheticLexicon()), std::invalid_argument);
  EXPECT_THROW(GenerateSyntheticCorpus(5, 1, SmallLexicon()), std::invalid_argument);
}

// Recomputes polyphone readings, tones and stacked prosody from the words
// implied by the CWS tags and POS labels.
TEST(SyntheticTest, LabelsFollowContextRules) {
  const Lexicon lex = MakeSyntheticLexicon();
  SyntheticOptions opts;
  const auto tags = SyntheticPosTags(opts.pos_tagset_size);
  const auto utts = GenerateSyntheticCorpus(1000, 99, lex, opts);
  size_t polyphone_sites = 0;
  for (const auto& u : utts) {
    ASSERT_NO_THROW(ValidateUtterance(u));
    ASSERT_EQ(u.prosody.back(), kIP);
    size_t start = 0;
    int words_since_break = 0;
    for (size_t t = 0; t < u.size(); ++t) {
      if (u.cws[t] == CwsTag::kB || u.cws[t] == CwsTag::kS) start = t;
      const int cls = static_cast<int>(std::find(tags.begin(), tags.end(), u.pos[t]) - tags.begin());
      const auto& prons = *lex.Find(u.chars[t]);
      const int offset = static_cast<int>(t - start);
      const Pronunciation& p = prons[(cls + offset) % prons.size()];
      EXPECT_EQ(u.phonemes[t], p.syllable);
      polyphone_sites += prons.size() > 1;
      const bool word_end = u.cws[t] == CwsTag::kE || u.cws[t] == CwsTag::kS;
      int expected_tone = p.tone;
      if (!word_end && p.tone == 3) {
        const auto& next = *lex.Find(u.chars[t + 1]);
        if (next[(cls + offset + 1) % next.size()].tone == 3) expected_tone = 2;
      }
      EXPECT_EQ(u.tones[t], expected_tone);
      if (!word_end) {
        EXPECT_EQ(u.prosody[t], kNoBreak);
        continue;
      }
      ++words_since_break;
      int level = kPW;
      if (t + 1 == u.size() || tags[cls] == "c") {
        level = kIP;
      } else if (tags[cls] == "u" || words_since_break >= 3) {
        level = kPP;
      }
      if (level >= kPP) words_since_break = 0;
      EXPECT_EQ(u.prosody[t], level);
    }
  }
  EXPECT_GT(polyphone_sites, 1000u);
}

TEST(LexiconTest, TextRoundTripAndValidation) {
  const Lexicon lex = MakeSyntheticLexicon();
  EXPECT_EQ(Lexicon::FromText(lex.ToText()).ToText(), lex.ToText());
  EXPECT_EQ(lex.num_polyphones(), 13u);
  Lexicon bad;
  EXPECT_THROW(bad.Add("中", {}), std::invalid_argument);
  EXPECT_THROW(bad.Add("中", {{"zhong", 6}}), std::invalid_argument);
}

}  // namespace
}  // namespace unifront
