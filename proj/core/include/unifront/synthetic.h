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

#ifndef UNIFRONT_SYNTHETIC_H_
#define UNIFRONT_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "unifront/corpus.h"
#include "unifront/lexicon.h"

namespace unifront {

// Desk-scale stand-in for a labelled front-end corpus.
//
// A fixed word inventory is derived from the lexicon (independent of the
// sampling seed, so corpora drawn with different seeds share it). Each word
// has one or two POS classes; an ambiguous word takes its first class when
// the previous word's class is even (or at sentence start), else its second.
//
// Labels follow deterministic rules so the task is learnable:
//  * polyphone pronunciation index = (pos class + offset in word) mod
//    number of candidates; monophones use their only candidate;
//  * tone = candidate tone, except a tone 3 followed by a tone 3 inside the
//    same word becomes 2;
//  * prosody: 0 inside a word; at a word end IP for the last word or a
//    class-"c" word, PP for a class-"u" word or the third word since the
//    previous PP/IP, PW otherwise.
struct SyntheticOptions {
  int pos_tagset_size = 8;   // number of POS classes used, 6..10
  int min_words = 3;
  int max_words = 7;
  int inventory_words = 80;
};

// Real Mandarin characters with pinyin; 13 polyphones, 35 monophones.
Lexicon MakeSyntheticLexicon();

// The first n tags of the synthetic POS alphabet; index = class id.
std::vector<std::string> SyntheticPosTags(int n);

inline int SyntheticPronunciationIndex(int pos_class, int offset_in_word,
                                       int num_candidates) {
  return (pos_class + offset_in_word) % num_candidates;
}

// Requires >= 20 lexicon entries with >= 5 polyphones and n >= 1.
std::vector<Utterance> GenerateSyntheticCorpus(
    int n, uint64_t seed, const Lexicon& lexicon,
    const SyntheticOptions& options = {});

}  // namespace unifront

#endif  // UNIFRONT_SYNTHETIC_H_
