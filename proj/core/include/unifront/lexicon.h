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

#ifndef UNIFRONT_LEXICON_H_
#define UNIFRONT_LEXICON_H_

#include <string>
#include <unordered_map>
#include <vector>

namespace unifront {

struct Pronunciation {
  std::string syllable;  // toneless pinyin, erhua spelled out ("dianr")
  int tone = 5;          // 1..5, 5 = neutral

  bool operator==(const Pronunciation&) const = default;
};

// Character -> ordered candidate pronunciations. A character with more than
// one candidate is a polyphone.
class Lexicon {
 public:
  // Replaces any previous entry for `ch`. Throws on an empty list or a tone
  // outside 1..5.
  void Add(const std::string& ch, std::vector<Pronunciation> prons);

  // nullptr when the character is unknown.
  const std::vector<Pronunciation>* Find(const std::string& ch) const;
  bool IsPolyphone(const std::string& ch) const;

  size_t size() const { return chars_.size(); }
  size_t num_polyphones() const;
  // Characters in insertion order.
  const std::vector<std::string>& chars() const { return chars_; }

  // File format: one line per character, "char\tsyl:tone\tsyl:tone...".
  static Lexicon Load(const std::string& path);
  void Save(const std::string& path) const;
  std::string ToText() const;
  static Lexicon FromText(const std::string& text);

 private:
  std::vector<std::string> chars_;
  std::unordered_map<std::string, std::vector<Pronunciation>> entries_;
};

// mask[i] is true iff the lexicon lists more than one pronunciation for
// chars[i]. Unknown characters are not polyphones.
std::vector<bool> BuildPolyphoneMask(const std::vector<std::string>& chars,
                                     const Lexicon& lexicon);

}  // namespace unifront

#endif  // UNIFRONT_LEXICON_H_
