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

#ifndef UNIFRONT_CORPUS_H_
#define UNIFRONT_CORPUS_H_

#include <span>
#include <string>
#include <vector>

#include "unifront/lexicon.h"
#include "unifront/vocab.h"

namespace unifront {

enum class CwsTag { kB = 0, kM = 1, kE = 2, kS = 3 };
inline constexpr int kNumCwsTags = 4;

char CwsTagChar(CwsTag tag);
CwsTag ParseCwsTag(const std::string& s);

// Prosody break strength after a character. Stacked: IP implies PP implies PW.
enum ProsodyLevel : int { kNoBreak = 0, kPW = 1, kPP = 2, kIP = 3 };

// One corpus example. All per-character sequences share the same length;
// `pos` may be empty for corpora without POS labels.
struct Utterance {
  std::vector<std::string> chars;
  std::vector<CwsTag> cws;
  std::vector<std::string> pos;
  std::vector<std::string> phonemes;
  std::vector<int> tones;
  std::vector<int> prosody;
  std::vector<bool> polyphone_mask;

  size_t size() const { return chars.size(); }
  bool has_pos() const { return !pos.empty(); }
  bool operator==(const Utterance&) const = default;
};

// True iff `tags` is a concatenation of words "S" or "B M* E".
bool IsValidBmes(std::span<const CwsTag> tags);

// Throws std::invalid_argument naming the first violated invariant.
void ValidateUtterance(const Utterance& utt);

struct CorpusStats {
  size_t records = 0;
  size_t unknown_chars = 0;         // positions whose char is not in the lexicon
  size_t unk_substitutions = 0;     // symbols replaced by <unk> against a vocab
};

// Parses one JSONL record:
//   {"text": str, "cws": "B E S", "pos": "n v", "syl": "zhong guo",
//    "tone": "1 2", "pros": "0 3"}
// "pos" is optional; syllables may instead carry tone digits ("zhong1"), in
// which case "tone" may be omitted. The polyphone mask is always rebuilt
// from `lexicon`.
Utterance ParseCorpusRecord(const std::string& line, const Lexicon& lexicon,
                            CorpusStats* stats = nullptr);
std::string FormatCorpusRecord(const Utterance& utt);

// Reads every record; errors carry the 1-based line number.
std::vector<Utterance> ReadCorpus(const std::string& path,
                                  const Lexicon& lexicon,
                                  CorpusStats* stats = nullptr);
// Like ReadCorpus, then replaces POS/phoneme symbols missing from `vocab`
// with "<unk>".
std::vector<Utterance> LoadCorpus(const std::string& path,
                                  const VocabSet& vocab,
                                  const Lexicon& lexicon,
                                  CorpusStats* stats = nullptr);
void WriteCorpus(const std::string& path, const std::vector<Utterance>& utts);

// Builds the vocabulary from lexicon syllables plus every symbol seen in the
// corpus. Throws if the corpus uses more POS tags than `pos_tagset_size`.
VocabSet BuildVocab(const Lexicon& lexicon, const std::vector<Utterance>& utts,
                    int pos_tagset_size = 99);

// Index form consumed by the models. `cws` holds raw tag values 0..3; the
// other families hold vocabulary ids.
struct EncodedUtterance {
  std::vector<int> chars;
  std::vector<int> cws;
  std::vector<int> pos;
  std::vector<int> phonemes;
  std::vector<int> tones;
  std::vector<int> prosody;
  std::vector<bool> polyphone_mask;

  size_t size() const { return chars.size(); }
};

EncodedUtterance Encode(const Utterance& utt, const VocabSet& vocab);
Utterance Decode(const EncodedUtterance& enc, const VocabSet& vocab);

}  // namespace unifront

#endif  // UNIFRONT_CORPUS_H_
