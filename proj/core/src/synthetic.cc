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

#include "unifront/synthetic.h"

#include <random>
#include <stdexcept>

namespace unifront {

namespace {

constexpr int kParticleClass = 4;     // "u"
constexpr int kConjunctionClass = 5;  // "c"
constexpr uint64_t kInventorySeed = 0x5eed0f1e;

struct Word {
  std::vector<std::string> chars;
  std::vector<int> classes;  // one or two POS classes
};

std::vector<Word> BuildInventory(const Lexicon& lexicon,
                                 const SyntheticOptions& opts) {
  std::mt19937_64 rng(kInventorySeed + lexicon.size());
  const auto& chars = lexicon.chars();
  std::uniform_int_distribution<size_t> pick_char(0, chars.size() - 1);
  std::uniform_int_distribution<int> pick_class(0, opts.pos_tagset_size - 1);
  std::discrete_distribution<int> pick_len({30, 50, 20});
  std::bernoulli_distribution ambiguous(0.4);
  std::vector<Word> words;
  words.reserve(opts.inventory_words);
  for (int w = 0; w < opts.inventory_words; ++w) {
    Word word;
    int len = pick_len(rng) + 1;
    for (int k = 0; k < len; ++k) word.chars.push_back(chars[pick_char(rng)]);
    word.classes.push_back(pick_class(rng));
    if (ambiguous(rng)) {
      int second = pick_class(rng);
      if (second != word.classes[0]) word.classes.push_back(second);
    }
    words.push_back(std::move(word));
  }
  return words;
}

}  // namespace

Lexicon MakeSyntheticLexicon() {
  Lexicon lex;
  auto add = [&lex](const char* ch, std::vector<Pronunciation> prons) {
    lex.Add(ch, std::move(prons));
  };
  add("行", {{"xing", 2}, {"hang", 2}});
  add("长", {{"chang", 2}, {"zhang", 3}});
  add("重", {{"zhong", 4}, {"chong", 2}});
  add("好", {{"hao", 3}, {"hao", 4}});
  add("乐", {{"le", 4}, {"yue", 4}});
  add("还", {{"hai", 2}, {"huan", 2}});
  add("得", {{"de", 5}, {"dei", 3}, {"de", 2}});
  add("地", {{"di", 4}, {"de", 5}});
  add("的", {{"de", 5}, {"di", 4}, {"di", 2}});
  add("了", {{"le", 5}, {"liao", 3}});
  add("为", {{"wei", 4}, {"wei", 2}});
  add("和", {{"he", 2}, {"he", 4}, {"huo", 2}});
  add("点", {{"dian", 3}, {"dianr", 3}});
  const std::vector<std::pair<const char*, Pronunciation>> mono = {
      {"中", {"zhong", 1}}, {"国", {"guo", 2}},  {"人", {"ren", 2}},
      {"北", {"bei", 3}},   {"京", {"jing", 1}}, {"我", {"wo", 3}},
      {"你", {"ni", 3}},    {"他", {"ta", 1}},   {"是", {"shi", 4}},
      {"在", {"zai", 4}},   {"有", {"you", 3}},  {"大", {"da", 4}},
      {"小", {"xiao", 3}},  {"天", {"tian", 1}}, {"水", {"shui", 3}},
      {"山", {"shan", 1}},  {"学", {"xue", 2}},  {"生", {"sheng", 1}},
      {"老", {"lao", 3}},   {"师", {"shi", 1}},  {"买", {"mai", 3}},
      {"卖", {"mai", 4}},   {"书", {"shu", 1}},  {"花", {"hua", 1}},
      {"车", {"che", 1}},   {"马", {"ma", 3}},   {"走", {"zou", 3}},
      {"看", {"kan", 4}},   {"想", {"xiang", 3}}, {"说", {"shuo", 1}},
      {"很", {"hen", 3}},   {"美", {"mei", 3}},  {"口", {"kou", 3}},
      {"雨", {"yu", 3}},    {"手", {"shou", 3}},
  };
  for (const auto& [ch, p] : mono) add(ch, {p});
  return lex;
}

std::vector<std::string> SyntheticPosTags(int n) {
  static const std::vector<std::string> kTags = {"n", "v", "a", "d", "u",
                                                 "c", "r", "m", "q", "p"};
  if (n < kConjunctionClass + 1 || n > static_cast<int>(kTags.size())) {
    throw std::invalid_argument("synthetic POS tag-set size must be in 6..10");
  }
  return {kTags.begin(), kTags.begin() + n};
}

std::vector<Utterance> GenerateSyntheticCorpus(int n, uint64_t seed,
                                               const Lexicon& lexicon,
                                               const SyntheticOptions& options) {
  if (n < 1) throw std::invalid_argument("synthetic corpus size must be >= 1");
  if (lexicon.size() < 20 || lexicon.num_polyphones() < 5) {
    throw std::invalid_argument(
        "synthetic generation needs >= 20 lexicon entries and >= 5 polyphones");
  }
  if (options.min_words < 1 || options.max_words < options.min_words) {
    throw std::invalid_argument("invalid synthetic sentence length range");
  }
  const auto tags = SyntheticPosTags(options.pos_tagset_size);
  const auto inventory = BuildInventory(lexicon, options);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_count(options.min_words,
                                                options.max_words);
  std::uniform_int_distribution<size_t> pick_word(0, inventory.size() - 1);

  std::vector<Utterance> out;
  out.reserve(n);
  for (int u = 0; u < n; ++u) {
    Utterance utt;
    const int num_words = pick_count(rng);
    int prev_class = 0;
    int words_since_break = 0;
    for (int w = 0; w < num_words; ++w) {
      const Word& word = inventory[pick_word(rng)];
      const int cls = word.classes.size() == 1 ? word.classes[0]
                                               : word.classes[prev_class % 2];
      const size_t len = word.chars.size();
      std::vector<int> base_tones;
      for (size_t k = 0; k < len; ++k) {
        const auto& prons = *lexicon.Find(word.chars[k]);
        const Pronunciation& p =
            prons[SyntheticPronunciationIndex(cls, static_cast<int>(k),
                                              static_cast<int>(prons.size()))];
        utt.chars.push_back(word.chars[k]);
        utt.cws.push_back(len == 1 ? CwsTag::kS
                          : k == 0 ? CwsTag::kB
                          : k + 1 == len ? CwsTag::kE
                                         : CwsTag::kM);
        utt.pos.push_back(tags[cls]);
        utt.phonemes.push_back(p.syllable);
        base_tones.push_back(p.tone);
        utt.prosody.push_back(kNoBreak);
      }
      for (size_t k = 0; k < len; ++k) {
        bool sandhi = k + 1 < len && base_tones[k] == 3 && base_tones[k + 1] == 3;
        utt.tones.push_back(sandhi ? 2 : base_tones[k]);
      }
      ++words_since_break;
      int level = kPW;
      if (w + 1 == num_words || cls == kConjunctionClass) {
        level = kIP;
      } else if (cls == kParticleClass || words_since_break >= 3) {
        level = kPP;
      }
      if (level >= kPP) words_since_break = 0;
      utt.prosody.back() = level;
      prev_class = cls;
    }
    utt.polyphone_mask = BuildPolyphoneMask(utt.chars, lexicon);
    ValidateUtterance(utt);
    out.push_back(std::move(utt));
  }
  return out;
}

}  // namespace unifront
