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


#include "unifront/metrics.h"

#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "scripted_decoder.h"
#include "unifront/synthetic.h"

namespace unifront {
namespace {

std::vector<CwsTag> Tags(const std::string& s) {
  std::vector<CwsTag> out;
  for (char c : s) out.push_back(ParseCwsTag(std::string(1, c)));
  return out;
}

// A word starts wherever the tag says so or the previous tag closed a word,
// and ends wherever the tag says so or the next tag opens a word.
std::set<std::pair<int, int>> OracleSpans(const std::vector<CwsTag>& t) {
  const int n = static_cast<int>(t.size());
  auto closes = [](CwsTag x) { return x == CwsTag::kE || x == CwsTag::kS; };
  auto opens = [](CwsTag x) { return x == CwsTag::kB || x == CwsTag::kS; };
  std::set<std::pair<int, int>> spans;
  int start = 0;
  for (int i = 0; i < n; ++i) {
    if (i == n - 1 || closes(t[i]) || opens(t[i + 1])) {
      spans.emplace(start, i);
      start = i + 1;
    }
  }
  return spans;
}

TEST(BlockF1Test, HandExamples) {
  // gold: [0,1] [2] [3,5]; pred: [0,1] [2,3] [4] [5]
  F1Counts c = BlockF1(Tags("BESBME"), Tags("BEBESS"));
  EXPECT_EQ(c, (F1Counts{1, 4, 3}));
  EXPECT_DOUBLE_EQ(*c.F1(), 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(*BlockF1(Tags("BMES"), Tags("BMES")).F1(), 1.0);
  // Orphan M opens a word, orphan E is a single, and an open word closes.
  EXPECT_EQ(CanonicalizeBmes(Tags("MES")), Tags("BES"));
  EXPECT_EQ(CanonicalizeBmes(Tags("ESB")), Tags("SSS"));
  EXPECT_EQ(CanonicalizeBmes(Tags("BMBM")), Tags("BEBE"));
  EXPECT_EQ(CanonicalizeBmes(Tags("BS")), Tags("SS"));
  EXPECT_THROW(BlockF1(Tags("BE"), Tags("S")), std::invalid_argument);
}

TEST(BlockF1Test, MatchesSpanOracleExhaustively) {
  for (int n = 1; n <= 4; ++n) {
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    auto decode = [n](int code) {
      std::vector<CwsTag> t;
      for (int i = 0; i < n; ++i, code /= 4) t.push_back(static_cast<CwsTag>(code % 4));
      return t;
    };
    for (int a = 0; a < total; ++a) {
      const auto gold = decode(a);
      const auto g = OracleSpans(gold);
      EXPECT_TRUE(IsValidBmes(CanonicalizeBmes(gold)));
      for (int b = 0; b < total; ++b) {
        const auto pred = decode(b);
        const auto p = OracleSpans(pred);
        int64_t tp = 0;
        for (const auto& s : p) tp += g.count(s);
        ASSERT_EQ(BlockF1(gold, pred), (F1Counts{tp, static_cast<int64_t>(p.size()),
                                                 static_cast<int64_t>(g.size())}))
            << "n=" << n << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(F1CountsTest, UndefinedWithoutAnyBlocks) {
  F1Counts c;
  EXPECT_FALSE(c.F1().has_value());
  EXPECT_FALSE(c.Precision().has_value());
  c.gold = 2;
  EXPECT_DOUBLE_EQ(*c.F1(), 0.0);
  EXPECT_DOUBLE_EQ(*c.Recall(), 0.0);
  EXPECT_FALSE(c.Precision().has_value());
}

TEST(ProsodyF1Test, StackedLevels) {
  ProsodyCounts c = StackedProsodyF1(std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 1, 1, 3});
  EXPECT_DOUBLE_EQ(*c.pw.F1(), 1.0);
  EXPECT_EQ(c.pp, (F1Counts{1, 1, 2}));
  EXPECT_DOUBLE_EQ(*c.pp.F1(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*c.ip.F1(), 1.0);
  // Missing predictions count as no break.
  ProsodyCounts shortp = StackedProsodyF1(std::vector<int>{1, 3}, std::vector<int>{1});
  EXPECT_EQ(shortp.ip, (F1Counts{0, 0, 1}));
  EXPECT_DOUBLE_EQ(*shortp.ip.F1(), 0.0);
}

TEST(G2pAccuracyTest, MaskedPositionsOnly) {
  const std::vector<int> gold = {5, 6, 7, 8, 9, 10};
  const std::vector<int> pred = {5, 0, 7, 8, 0, 10};
  const std::vector<bool> mask = {true, false, true, true, true, false};
  AccuracyCounts c = G2pAccuracy(gold, pred, mask);
  EXPECT_EQ(c, (AccuracyCounts{3, 4}));
  EXPECT_DOUBLE_EQ(*c.Value(), 0.75);
  EXPECT_FALSE(G2pAccuracy(gold, pred, std::vector<bool>(6, false)).Value().has_value());
  // A prediction that stopped early scores missing positions as wrong.
  EXPECT_EQ(G2pAccuracy(gold, std::vector<int>{5}, mask), (AccuracyCounts{1, 4}));
}

TEST(ScoreUtteranceTest, ToneMismatchIsAG2pError) {
  Utterance gold;
  gold.chars = {"行", "人"};
  gold.phonemes = {"xing", "ren"};
  gold.tones = {2, 2};
  gold.prosody = {0, 3};
  gold.polyphone_mask = {true, false};
  PredictionRecord pred;
  pred.chars = gold.chars;
  pred.phonemes = {"xing", "ren"};
  pred.tones = {4, 1};
  pred.prosody = {0, 3};
  MetricsReport r = ScoreUtterance(gold, pred);
  EXPECT_EQ(r.g2p, (AccuracyCounts{0, 1}));
  pred.tones = {2, 1};
  EXPECT_EQ(ScoreUtterance(gold, pred).g2p, (AccuracyCounts{1, 1}));
}

TEST(MetricsReportTest, MergingIsMicroAveraged) {
  MetricsReport a;
  a.g2p = {1, 1};
  a.prosody.pw = {1, 1, 1};
  MetricsReport b;
  b.g2p = {0, 3};
  b.prosody.pw = {0, 3, 1};
  a += b;
  EXPECT_DOUBLE_EQ(*a.g2p.Value(), 0.25);
  EXPECT_DOUBLE_EQ(*a.prosody.pw.F1(), 2.0 / 6.0);
  const auto j = a.ToJson();
  EXPECT_TRUE(j["cws_block_f1"].is_null());
  EXPECT_TRUE(j["pos_acc"].is_null());
  EXPECT_DOUBLE_EQ(j["g2p_acc"].get<double>(), 0.25);
  EXPECT_EQ(j["counts"]["g2p"]["total"], 4);
}

TEST(MetricsTableTest, MarksUndefinedValues) {
  MetricsReport r;
  r.g2p = {3, 4};
  const std::string table = FormatMetricsTable({{"AR", r}});
  EXPECT_NE(table.find("0.7500"), std::string::npos) << table;
  EXPECT_NE(table.find("G2P"), std::string::npos);
  EXPECT_NE(table.find("n/a"), std::string::npos) << table;
}

TEST(EvaluateDecoderTest, GoldReplayScoresPerfectly) {
  const Lexicon lex = MakeSyntheticLexicon();
  const auto corpus = GenerateSyntheticCorpus(30, 21, lex);
  const VocabSet vocab = BuildVocab(lex, corpus, 10);
  testing::ScriptedDecoder model(vocab);
  for (const auto& u : corpus) {
    EncodedUtterance e = Encode(u, vocab);
    model.Add(e.chars, testing::GoldScript(e));
  }
  for (DecodeMode mode : {DecodeMode::kAr, DecodeMode::kSar}) {
    DecodeOptions options;
    options.mode = mode;
    MetricsReport r = EvaluateDecoder(model, corpus, lex, options);
    EXPECT_DOUBLE_EQ(*r.g2p.Value(), 1.0);
    EXPECT_DOUBLE_EQ(*r.prosody.pw.F1(), 1.0);
    EXPECT_DOUBLE_EQ(*r.prosody.pp.F1(), 1.0);
    EXPECT_DOUBLE_EQ(*r.prosody.ip.F1(), 1.0);
    EXPECT_EQ(r.utterances, 30);
    EXPECT_EQ(r.truncated, 0);
    EXPECT_GT(r.g2p.total, 0);
  }
}

}  // namespace
}  // namespace unifront
